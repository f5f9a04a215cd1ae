#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "bellsim/montecarlo.hpp"

using namespace bellsim;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

RunConfig quantum_config(std::uint64_t trials, std::uint64_t seed, Scheme scheme) {
  RunConfig config;
  config.n_trials = trials;
  config.seed = seed;
  config.source = PhaseConfig::chsh_optimal();
  config.scheme = scheme;
  return config;
}

RunConfig lhv_config(std::uint64_t trials, std::uint64_t seed, double p, Scheme scheme) {
  RunConfig config;
  config.n_trials = trials;
  config.seed = seed;
  config.source = forgery_model(p);
  config.scheme = scheme;
  return config;
}

// 5-sigma binomial band for a frequency around prob
void check_frequency(std::uint64_t count, std::uint64_t total, double prob) {
  const double sigma = std::sqrt(prob * (1.0 - prob) / static_cast<double>(total));
  CHECK(std::abs(static_cast<double>(count) / static_cast<double>(total) - prob) <
        5.0 * sigma);
}

} // namespace

TEST_CASE("config validation") {
  RunConfig config = quantum_config(0, 1, Scheme::genuine);
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.n_trials = 10;
  CHECK_NOTHROW(config.validate());
  config.setting_probs = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.setting_probs = {0.7, 0.3, -0.1, 0.1};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("a single trial is recorded completely") {
  const TallySet tallies = run(quantum_config(1, 123, Scheme::genuine));
  CHECK(tallies.trials == 1);
  std::uint64_t pattern_total = 0;
  std::uint64_t outcome_total = 0;
  std::uint64_t detection_total = 0;
  for (int idx = 0; idx < 4; ++idx) {
    pattern_total += tallies.pair_trials(idx);
    outcome_total += tallies.kept_total(idx) + tallies.rejected[idx];
  }
  for (int side = 0; side < 2; ++side) {
    for (int setting = 0; setting < 2; ++setting) {
      detection_total += tallies.detections[side][setting][0] +
                         tallies.detections[side][setting][1];
    }
  }
  CHECK(pattern_total == 1);
  CHECK(outcome_total == 1);
  CHECK(detection_total == 2); // both photons always land somewhere
}

TEST_CASE("identical configs give bit-identical tallies for any thread count") {
  RunConfig config = quantum_config(40000, 99, Scheme::genuine);
  config.threads = 1;
  const TallySet serial = run(config);
  config.threads = 3;
  const TallySet threaded = run(config);
  config.threads = 8;
  const TallySet oversubscribed = run(config);
  CHECK(serial == threaded);
  CHECK(serial == oversubscribed);

  // and a different seed changes the outcome
  RunConfig other = quantum_config(40000, 100, Scheme::genuine);
  CHECK_FALSE(run(other) == serial);
}

TEST_CASE("tally bookkeeping is consistent") {
  const TallySet tallies = run(lhv_config(30000, 5, 0.85, Scheme::franson));
  CHECK(tallies.trials == 30000);
  for (int idx = 0; idx < 4; ++idx) {
    // kept + rejected exhausts each pair's trials
    CHECK(tallies.kept_total(idx) + tallies.rejected[idx] == tallies.pair_trials(idx));
    // rejected trials are exactly the non-coincident patterns
    CHECK(tallies.rejected[idx] ==
          tallies.patterns[idx][kSL] + tallies.patterns[idx][kLS]);
  }
}

TEST_CASE("estimator on hand-built tallies") {
  TallySet tallies;
  for (int idx = 0; idx < 4; ++idx) {
    tallies.kept[idx][1][1] = 50; // all kept trials agree (+,+)
    tallies.patterns[idx][kSS] = 50;
    tallies.trials += 50;
  }
  const ChshEstimate estimate = estimate_chsh(tallies);
  CHECK(estimate.beta_hat == doctest::Approx(2.0));
  CHECK(estimate.std_error == doctest::Approx(0.0));

  // counts proportional to the quantum law at the optimal phases: correlators
  // are +-sqrt(2)/2 up to integer rounding, beta_hat lands on 2 sqrt 2
  TallySet quantum;
  const double n = 1e8;
  const std::array<double, 4> cosines = {kSqrt2 / 2, kSqrt2 / 2, kSqrt2 / 2, -kSqrt2 / 2};
  for (int idx = 0; idx < 4; ++idx) {
    for (int a : {0, 1}) {
      for (int b : {0, 1}) {
        const double prob =
            0.25 * (1.0 + (a ? 1 : -1) * (b ? 1 : -1) * cosines[idx]);
        quantum.kept[idx][a][b] = static_cast<std::uint64_t>(std::llround(prob * n));
      }
    }
  }
  CHECK(estimate_chsh(quantum).beta_hat == doctest::Approx(2.0 * kSqrt2).epsilon(1e-6));
}

TEST_CASE("estimator rejects pairs with no kept trials") {
  TallySet tallies;
  tallies.kept[0][1][1] = 10;
  tallies.kept[1][1][1] = 10;
  tallies.kept[2][1][1] = 10;
  // pair A1B1 has nothing kept
  CHECK_THROWS_AS(estimate_chsh(tallies), EstimationError);
}

TEST_CASE("forgery endpoints reproduce exactly under franson postselection") {
  const TallySet plus = run(lhv_config(100000, 1, 1.0, Scheme::franson));
  const ChshEstimate plus_estimate = estimate_chsh(plus);
  CHECK(plus_estimate.beta_hat == 4.0);
  CHECK(plus_estimate.std_error == 0.0);

  const TallySet minus = run(lhv_config(100000, 2, 0.0, Scheme::franson));
  CHECK(estimate_chsh(minus).beta_hat == -4.0);
}

TEST_CASE("quantum source at the optimal phases violates the classical bound") {
  const TallySet tallies = run(quantum_config(400000, 7, Scheme::genuine));
  const ChshEstimate estimate = estimate_chsh(tallies);
  CHECK(std::abs(estimate.beta_hat - 2.0 * kSqrt2) < 4.0 * estimate.std_error);
  CHECK(estimate.beta_hat > 2.0);
}

TEST_CASE("monte carlo agrees with the exact evaluator across mixtures") {
  const double p_quantum = (2.0 + kSqrt2) / 4.0;
  std::uint64_t seed = 31;
  for (double p : {0.0, 0.25, 0.5, p_quantum, 1.0}) {
    const TallySet tallies = run(lhv_config(200000, seed++, p, Scheme::franson));
    const ChshEstimate estimate = estimate_chsh(tallies);
    const double exact = coincidence_beta_exact(forgery_model(p)).chsh.beta;
    CHECK(std::abs(estimate.beta_hat - exact) <= 4.0 * estimate.std_error);
  }
}

TEST_CASE("split fractions and keep fractions") {
  for (Scheme scheme : {Scheme::franson, Scheme::genuine}) {
    const TallySet quantum = run(quantum_config(200000, 17, scheme));
    for (double fraction : split_fractions(quantum)) {
      CHECK(std::abs(fraction - 0.25) < 5.0 * std::sqrt(0.25 * 0.75 / 200000.0));
    }
    for (int idx = 0; idx < 4; ++idx) {
      check_frequency(quantum.kept_total(idx), quantum.pair_trials(idx), 0.5);
    }

    const TallySet lhv = run(lhv_config(200000, 23, 0.85, scheme));
    for (double fraction : split_fractions(lhv)) {
      CHECK(std::abs(fraction - 0.25) < 5.0 * std::sqrt(0.25 * 0.75 / 200000.0));
    }
  }
}

TEST_CASE("detector marginals are even, kept-only and overall") {
  for (Scheme scheme : {Scheme::franson, Scheme::genuine}) {
    for (bool quantum : {true, false}) {
      const TallySet tallies = quantum ? run(quantum_config(150000, 29, scheme))
                                       : run(lhv_config(150000, 37, 0.85, scheme));
      // overall marginals per observer and local setting
      for (int side = 0; side < 2; ++side) {
        for (int setting = 0; setting < 2; ++setting) {
          const std::uint64_t minus = tallies.detections[side][setting][0];
          const std::uint64_t plus = tallies.detections[side][setting][1];
          check_frequency(plus, plus + minus, 0.5);
        }
      }
      // kept-only marginals per setting pair
      for (int idx = 0; idx < 4; ++idx) {
        const auto& k = tallies.kept[idx];
        const std::uint64_t n = tallies.kept_total(idx);
        check_frequency(k[1][0] + k[1][1], n, 0.5); // left observer sign +
        check_frequency(k[0][1] + k[1][1], n, 0.5); // right observer sign +
      }
    }
  }
}

TEST_CASE("setting choices follow the configured distribution") {
  RunConfig config = quantum_config(200000, 41, Scheme::genuine);
  config.setting_probs = {0.1, 0.2, 0.3, 0.4};
  const TallySet tallies = run(config);
  for (int idx = 0; idx < 4; ++idx) {
    check_frequency(tallies.pair_trials(idx), tallies.trials, config.setting_probs[idx]);
  }
}

TEST_CASE("tally merge is plain componentwise addition") {
  const TallySet a = run(quantum_config(5000, 3, Scheme::franson));
  const TallySet b = run(lhv_config(3000, 4, 0.5, Scheme::franson));
  TallySet merged;
  merged += a;
  merged += b;
  CHECK(merged.trials == a.trials + b.trials);
  for (int idx = 0; idx < 4; ++idx) {
    CHECK(merged.kept_total(idx) == a.kept_total(idx) + b.kept_total(idx));
    CHECK(merged.rejected[idx] == a.rejected[idx] + b.rejected[idx]);
    CHECK(merged.pair_trials(idx) == a.pair_trials(idx) + b.pair_trials(idx));
  }
  for (int side = 0; side < 2; ++side) {
    for (int setting = 0; setting < 2; ++setting) {
      for (int sign = 0; sign < 2; ++sign) {
        CHECK(merged.detections[side][setting][sign] ==
              a.detections[side][setting][sign] + b.detections[side][setting][sign]);
      }
    }
  }
}

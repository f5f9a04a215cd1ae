#include "bellsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <vector>

#include "bellsim/rng.hpp"

namespace bellsim {

void RunConfig::validate() const {
  if (n_trials < 1) {
    throw std::invalid_argument("n_trials must be >= 1");
  }
  double total = 0.0;
  for (double prob : setting_probs) {
    if (!(prob >= 0.0) || !std::isfinite(prob)) {
      throw std::invalid_argument("setting probabilities must be finite and non-negative");
    }
    total += prob;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("setting probabilities must sum to 1");
  }
  if (const auto* model = std::get_if<LhvModel>(&source)) {
    model->validate();
  }
}

std::uint64_t TallySet::pair_trials(int pair_idx) const {
  const auto& row = patterns[pair_idx];
  return std::accumulate(row.begin(), row.end(), std::uint64_t{0});
}

std::uint64_t TallySet::kept_total(int pair_idx) const {
  const auto& k = kept[pair_idx];
  return k[0][0] + k[0][1] + k[1][0] + k[1][1];
}

TallySet& TallySet::operator+=(const TallySet& other) {
  for (int idx = 0; idx < 4; ++idx) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        kept[idx][a][b] += other.kept[idx][a][b];
      }
    }
    rejected[idx] += other.rejected[idx];
    for (int pat = 0; pat < 4; ++pat) {
      patterns[idx][pat] += other.patterns[idx][pat];
    }
  }
  for (int side = 0; side < 2; ++side) {
    for (int setting = 0; setting < 2; ++setting) {
      for (int sign = 0; sign < 2; ++sign) {
        detections[side][setting][sign] += other.detections[side][setting][sign];
      }
    }
  }
  trials += other.trials;
  return *this;
}

void TallySet::record(const TrialOutcome& outcome) {
  const int idx = pair_index(outcome.pair);
  const PathChoice path1 = outcome.event1.time_slot == 0 ? PathChoice::S : PathChoice::L;
  const PathChoice path2 = outcome.event2.time_slot == 0 ? PathChoice::S : PathChoice::L;
  patterns[idx][slot_pattern(path1, path2)] += 1;

  for (const DetectionEvent& event : {outcome.event1, outcome.event2}) {
    const int side = event.side == Side::left ? 0 : 1;
    const int local_setting = side == 0 ? outcome.pair.alice : outcome.pair.bob;
    detections[side][local_setting][sign_index(event.detector_sign)] += 1;
  }

  if (outcome.kept) {
    // Outcome a is whatever the left detectors registered, b the right ones.
    const DetectionEvent& left =
        outcome.event1.side == Side::left ? outcome.event1 : outcome.event2;
    const DetectionEvent& right =
        outcome.event1.side == Side::right ? outcome.event1 : outcome.event2;
    kept[idx][sign_index(left.detector_sign)][sign_index(right.detector_sign)] += 1;
  } else {
    rejected[idx] += 1;
  }
  trials += 1;
}

namespace {

// Per-run immutable sampling tables; per-trial draws binary-search the CDFs.
struct SamplerContext {
  Scheme scheme;
  bool quantum = false;
  std::array<double, 4> pair_cdf{};
  std::array<std::array<double, 4>, 4> outcome_cdf{}; // per pair: ++, +-, -+, --
  std::vector<double> model_cdf;                      // 256 entries

  explicit SamplerContext(const RunConfig& config) : scheme(config.scheme) {
    double acc = 0.0;
    for (int idx = 0; idx < 4; ++idx) {
      acc += config.setting_probs[idx];
      pair_cdf[idx] = acc;
    }
    pair_cdf[3] = 1.0;

    if (const auto* phases = std::get_if<PhaseConfig>(&config.source)) {
      quantum = true;
      for (int idx = 0; idx < 4; ++idx) {
        const SettingPair pair = pair_from_index(idx);
        double outcome_acc = 0.0;
        int cell = 0;
        for (int a : {+1, -1}) {
          for (int b : {+1, -1}) {
            outcome_acc += qm_joint_probability(*phases, pair, OutcomePair(a, b));
            outcome_cdf[idx][cell++] = outcome_acc;
          }
        }
        outcome_cdf[idx][3] = 1.0;
      }
    } else {
      const auto& model = std::get<LhvModel>(config.source);
      model_cdf.resize(256);
      double model_acc = 0.0;
      for (int i = 0; i < 256; ++i) {
        model_acc += model.weights[i];
        model_cdf[i] = model_acc;
      }
      model_cdf[255] = 1.0;
    }
  }
};

template <typename It>
int cdf_draw(It begin, It end, double u) {
  return static_cast<int>(std::upper_bound(begin, end, u) - begin);
}

void simulate_trial(const SamplerContext& ctx, std::uint64_t seed, std::uint64_t trial_index,
                    TallySet& tallies) {
  SplitMix64 rng = trial_stream(seed, trial_index);

  const int idx = cdf_draw(ctx.pair_cdf.begin(), ctx.pair_cdf.end(), rng.next_double());
  const SettingPair pair = pair_from_index(idx);

  PathChoice path1{};
  PathChoice path2{};
  int sign1 = +1;
  int sign2 = +1;

  if (ctx.quantum) {
    // Photon pair takes SS/SL/LS/LL with probability 1/4 each; coincident
    // patterns draw correlated signs, the rest draw independent fair signs.
    const int pattern = static_cast<int>(rng.next_double() * 4.0);
    path1 = (pattern & 2) ? PathChoice::L : PathChoice::S;
    path2 = (pattern & 1) ? PathChoice::L : PathChoice::S;
    if (path1 == path2) {
      const int cell =
          cdf_draw(ctx.outcome_cdf[idx].begin(), ctx.outcome_cdf[idx].end(), rng.next_double());
      sign1 = (cell & 2) ? -1 : +1;
      sign2 = (cell & 1) ? -1 : +1;
    } else {
      sign1 = rng.next_sign();
      sign2 = rng.next_sign();
    }
  } else {
    const int set_index = cdf_draw(ctx.model_cdf.begin(), ctx.model_cdf.end(), rng.next_double());
    const auto [photon1, photon2] = evaluate_set(InstructionSet::from_index(set_index), pair);
    path1 = photon1.path;
    sign1 = photon1.sign;
    path2 = photon2.path;
    sign2 = photon2.sign;
  }

  tallies.record(make_trial(ctx.scheme, pair, path1, sign1, path2, sign2));
}

} // namespace

TallySet run(const RunConfig& config) {
  config.validate();
  const SamplerContext ctx(config);

  unsigned n_threads = config.threads != 0 ? config.threads
                                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(n_threads, config.n_trials));

  if (n_threads <= 1) {
    TallySet tallies;
    for (std::uint64_t t = 0; t < config.n_trials; ++t) {
      simulate_trial(ctx, config.seed, t, tallies);
    }
    return tallies;
  }

  std::vector<TallySet> partials(n_threads);
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  const std::uint64_t chunk = config.n_trials / n_threads;
  const std::uint64_t remainder = config.n_trials % n_threads;

  std::uint64_t begin = 0;
  for (unsigned w = 0; w < n_threads; ++w) {
    const std::uint64_t end = begin + chunk + (w < remainder ? 1 : 0);
    workers.emplace_back([&ctx, &config, &partials, w, begin, end] {
      for (std::uint64_t t = begin; t < end; ++t) {
        simulate_trial(ctx, config.seed, t, partials[w]);
      }
    });
    begin = end;
  }
  for (auto& worker : workers) {
    worker.join();
  }

  TallySet tallies;
  for (const TallySet& partial : partials) {
    tallies += partial;
  }
  return tallies;
}

ChshEstimate estimate_chsh(const TallySet& tallies) {
  ChshEstimate estimate;
  double variance = 0.0;
  for (int idx = 0; idx < 4; ++idx) {
    const auto& k = tallies.kept[idx];
    const std::uint64_t n = tallies.kept_total(idx);
    if (n == 0) {
      throw EstimationError(std::string("no kept trials on setting pair ") + pair_label(idx));
    }
    const double agree = static_cast<double>(k[1][1] + k[0][0]);
    const double disagree = static_cast<double>(k[1][0] + k[0][1]);
    const double c = (agree - disagree) / static_cast<double>(n);
    estimate.correlators[idx] = c;
    estimate.n_kept[idx] = n;
    variance += (1.0 - c * c) / static_cast<double>(n);
  }
  estimate.beta_hat = estimate.correlators[0] + estimate.correlators[1] +
                      estimate.correlators[2] - estimate.correlators[3];
  estimate.std_error = std::sqrt(variance);
  return estimate;
}

std::array<double, 4> split_fractions(const TallySet& tallies) {
  if (tallies.trials == 0) {
    throw EstimationError("no trials recorded");
  }
  std::array<double, 4> fractions{};
  for (int pat = 0; pat < 4; ++pat) {
    std::uint64_t count = 0;
    for (int idx = 0; idx < 4; ++idx) {
      count += tallies.patterns[idx][pat];
    }
    fractions[pat] = static_cast<double>(count) / static_cast<double>(tallies.trials);
  }
  return fractions;
}

std::array<double, 4> keep_fractions(const TallySet& tallies) {
  std::array<double, 4> fractions{};
  for (int idx = 0; idx < 4; ++idx) {
    const std::uint64_t total = tallies.pair_trials(idx);
    fractions[idx] =
        total == 0 ? 0.0
                   : static_cast<double>(tallies.kept_total(idx)) / static_cast<double>(total);
  }
  return fractions;
}

} // namespace bellsim

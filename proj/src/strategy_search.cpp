#include "bellsim/strategy_search.hpp"

#include <cmath>
#include <stdexcept>

namespace bellsim {

std::vector<InstructionSet> enumerate_strategies(ConstraintClass constraint) {
  std::vector<InstructionSet> strategies;
  strategies.reserve(constraint == ConstraintClass::path_fixed ? 64 : 256);
  for (int i = 0; i < 256; ++i) {
    InstructionSet set = InstructionSet::from_index(i);
    if (constraint == ConstraintClass::path_fixed && !is_path_fixed(set)) {
      continue;
    }
    strategies.push_back(set);
  }
  return strategies;
}

namespace {

StrategyEvaluation evaluate_strategy(const InstructionSet& set, Scheme scheme) {
  StrategyEvaluation eval;
  eval.set = set;
  eval.feasible = true;
  double beta = 0.0;
  for (int idx = 0; idx < 4; ++idx) {
    const SettingPair pair = pair_from_index(idx);
    const auto [photon1, photon2] = evaluate_set(set, pair);
    if (strategy_kept(set, pair, scheme)) {
      eval.contributions[idx] = photon1.sign * photon2.sign;
      beta += (idx == 3 ? -1.0 : 1.0) * *eval.contributions[idx];
    } else {
      eval.contributions[idx] = std::nullopt;
      eval.feasible = false;
    }
  }
  if (eval.feasible) {
    eval.beta = beta;
  }
  return eval;
}

} // namespace

SearchResult extremal_beta(ConstraintClass constraint, Scheme scheme) {
  SearchResult result;
  bool found = false;

  for (const InstructionSet& set : enumerate_strategies(constraint)) {
    StrategyEvaluation eval = evaluate_strategy(set, scheme);
    result.evaluated += 1;
    if (eval.feasible) {
      result.feasible += 1;
      if (!found || eval.beta > result.max_beta) {
        result.max_beta = eval.beta;
        result.argmax = set;
        result.max_mechanism = "pure strategy";
      }
      if (!found || eval.beta < result.min_beta) {
        result.min_beta = eval.beta;
        result.argmin = set;
        result.min_mechanism = "pure strategy";
      }
      found = true;
    } else {
      result.excluded += 1;
    }
    result.strategies.push_back(std::move(eval));
  }

  if (constraint == ConstraintClass::path_setting_dependent) {
    // Pure strategies kept on every pair never exceed |beta| = 2; the
    // conditional renormalization of mixtures does. The family mixtures at
    // p = 1 and p = 0 reach +-4, the hard cap on |beta|.
    const double beta_plus = coincidence_beta_exact(forgery_model(1.0)).chsh.beta;
    const double beta_minus = coincidence_beta_exact(forgery_model(0.0)).chsh.beta;
    if (beta_plus > result.max_beta) {
      result.max_beta = beta_plus;
      result.argmax.reset();
      result.max_mechanism = "family mixture p=1";
    }
    if (beta_minus < result.min_beta) {
      result.min_beta = beta_minus;
      result.argmin.reset();
      result.min_mechanism = "family mixture p=0";
    }
  }

  return result;
}

FakeViolationReport verify_fake_violation(double target, std::uint64_t trials,
                                          std::uint64_t seed) {
  FakeViolationReport report;
  report.target = target;
  report.p = solve_p_for_beta(target);
  report.trials = trials;
  report.seed = seed;

  const LhvModel model = forgery_model(report.p);
  const PostselectedBeta exact = coincidence_beta_exact(model);
  report.exact_beta = exact.chsh.beta;
  report.exact_keep_prob = exact.keep_prob;

  RunConfig config;
  config.n_trials = trials;
  config.seed = seed;
  config.source = model;
  config.scheme = Scheme::franson;
  const TallySet tallies = run(config);
  report.estimate = estimate_chsh(tallies);
  report.mc_keep_fraction = keep_fractions(tallies);
  return report;
}

} // namespace bellsim

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellsim/lhv.hpp"
#include "bellsim/montecarlo.hpp"
#include "bellsim/postselect.hpp"

namespace bellsim {

/// One enumerated strategy with its postselected contributions. A strategy is
/// feasible when it keeps at least one event on every setting pair; beta is
/// defined only for feasible strategies.
struct StrategyEvaluation {
  InstructionSet set;
  std::array<Contribution, 4> contributions{};
  bool feasible = false;
  double beta = 0.0; // valid when feasible
};

struct SearchResult {
  double max_beta = 0.0;
  double min_beta = 0.0;
  std::optional<InstructionSet> argmax; // set when an extremum comes from a pure strategy
  std::optional<InstructionSet> argmin;
  std::string max_mechanism; // "pure strategy" or "family mixture p=..."
  std::string min_mechanism;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
  std::size_t excluded = 0; // zero-kept pair somewhere; beta undefined
  std::vector<StrategyEvaluation> strategies;
};

/// All strategies in a constraint class: 256 for path_setting_dependent, 64
/// for path_fixed. Deterministic index order.
std::vector<InstructionSet> enumerate_strategies(ConstraintClass constraint);

/// Extremal beta attainable by mixtures of strategies in a class under a
/// scheme's postselection. For path_fixed the kept ensemble is setting
/// independent, postselected correlators are linear in the mixture weights,
/// and the pure-strategy vertices are extremal. For path_setting_dependent the
/// forgery-family mixtures reach +4 and -4, which |beta| <= 4 makes global.
SearchResult extremal_beta(ConstraintClass constraint, Scheme scheme);

struct FakeViolationReport {
  double target = 0.0;
  double p = 0.0;
  double exact_beta = 0.0;
  std::array<double, 4> exact_keep_prob{};
  ChshEstimate estimate;
  std::array<double, 4> mc_keep_fraction{};
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Builds the forgery mixture hitting `target` under Franson postselection,
/// evaluates it exactly and by simulation, and reports both. Rejects targets
/// outside [-4, 4].
FakeViolationReport verify_fake_violation(double target, std::uint64_t trials = 200000,
                                          std::uint64_t seed = 1);

} // namespace bellsim

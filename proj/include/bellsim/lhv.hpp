#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bellsim/phys_model.hpp"

namespace bellsim {

/// Short (early) or long (late) interferometer path.
enum class PathChoice : std::uint8_t { S = 0, L = 1 };

/// Detection time slot for a path: 0 for S, 1 for L.
constexpr int time_slot(PathChoice path) { return path == PathChoice::S ? 0 : 1; }

char path_letter(PathChoice path);

/// One cell of a deterministic local strategy: which path to take and which
/// detector sign to trigger, for one local setting.
struct LocalInstruction {
  PathChoice path = PathChoice::S;
  int sign = +1; // -1 or +1

  LocalInstruction() = default;
  LocalInstruction(PathChoice p, int s);

  /// Dense code 0..3: (path == L) * 2 + (sign > 0).
  int code() const;
  static LocalInstruction from_code(int code);

  /// Two-character form "S+", "S-", "L+" or "L-".
  std::string to_string() const;
  static LocalInstruction parse(const std::string& text);

  bool operator==(const LocalInstruction&) const = default;
};

/// A deterministic local strategy: per-setting instructions for both photons.
/// All 4^4 = 256 strategies are representable.
struct InstructionSet {
  LocalInstruction a0, a1; // photon 1 under settings A0, A1
  LocalInstruction b0, b1; // photon 2 under settings B0, B1

  /// Dense code 0..255, a0 most significant.
  int index() const;
  static InstructionSet from_index(int index);

  const LocalInstruction& alice(int setting) const { return setting == 0 ? a0 : a1; }
  const LocalInstruction& bob(int setting) const { return setting == 0 ? b0 : b1; }

  /// Same strategy with every detector sign reversed (paths unchanged).
  InstructionSet sign_flipped() const;

  std::string to_string() const; // "S+ S+ S+ L-"

  bool operator==(const InstructionSet&) const = default;
};

/// True when each photon's path is the same under both of its settings
/// (the detector sign may still depend on the setting).
bool is_path_fixed(const InstructionSet& set);

/// Locality constraint classes over deterministic strategies.
///   path_setting_dependent: path and sign may both depend on the local
///     setting; the full 256-strategy space.
///   path_fixed: the path is decided independently of the setting; 64
///     strategies. Coincidence postselection over this class keeps or rejects
///     a trial identically for every setting pair.
enum class ConstraintClass : std::uint8_t { path_setting_dependent, path_fixed };

/// Looks up the two instructions relevant for a trial at the given settings.
std::pair<LocalInstruction, LocalInstruction> evaluate_set(const InstructionSet& set,
                                                           const SettingPair& pair);

/// A probability distribution over the 256 deterministic strategies.
struct LhvModel {
  std::array<double, 256> weights{}; // indexed by InstructionSet::index()

  double weight(const InstructionSet& set) const { return weights[set.index()]; }

  /// Strategies with nonzero weight, in index order.
  std::vector<InstructionSet> support() const;

  /// Throws std::invalid_argument unless weights are non-negative and sum to 1
  /// within 1e-12.
  void validate() const;

  static LhvModel point_mass(const InstructionSet& set);
};

/// One transcribed row of the forgery families. `cells` lists the four
/// instructions "a0 a1 b0 b1" with exactly one cell carrying '*' in place of a
/// sign; the row expands to four strategies: the '+' and '-' variants of that
/// cell, plus both with every sign reversed. `contributions` lists the
/// strategy's per-pair contribution under coincidence postselection, in pair
/// order A0B0 A0B1 A1B0 A1B1, each "+1", "-1" or "rej"; the same column values
/// hold for all four expanded variants.
struct ForgeryRow {
  const char* cells;
  const char* contributions;
};

/// The eight rows whose strategies push beta toward +4.
std::span<const ForgeryRow> forgery_rows_plus();
/// The eight rows whose strategies push beta toward -4.
std::span<const ForgeryRow> forgery_rows_minus();

/// Expands one row into its four strategies (sign variants, then global flips).
std::array<InstructionSet, 4> expand_row(const ForgeryRow& row);

/// Per-pair contribution entry: +1/-1 when the trial is kept, nullopt when the
/// coincidence postselection rejects it.
using Contribution = std::optional<int>;

std::array<Contribution, 4> parse_contributions(const char* text);

struct ForgeryFamilies {
  std::vector<InstructionSet> plus;  // 32 strategies
  std::vector<InstructionSet> minus; // 32 strategies
};

/// Expands both families; the 64 strategies are pairwise distinct.
ForgeryFamilies forgery_families();

/// The one-parameter forgery mixture: weight p/32 on each plus-family
/// strategy and (1-p)/32 on each minus-family strategy. Rejects p outside
/// [0, 1]. Under Franson coincidence postselection this model yields
/// beta = 8p - 4, anywhere in [-4, 4].
LhvModel forgery_model(double p);

/// Per-pair contribution of one strategy under coincidence postselection:
/// rejected when the two paths differ, otherwise the product of the signs.
std::array<Contribution, 4> coincidence_contributions(const InstructionSet& set);

struct PostselectedBeta {
  ChshValue chsh;
  std::array<double, 4> keep_prob{}; // per setting pair
};

/// Exact (non-sampled) beta of a model under coincidence postselection.
/// Correlators are conditional on keeping. Throws std::domain_error when some
/// setting pair has zero keep probability.
PostselectedBeta coincidence_beta_exact(const LhvModel& model);

/// Inverts beta = 8p - 4 for the forgery mixture; the result is verified by
/// exact evaluation. Rejects targets outside [-4, 4].
double solve_p_for_beta(double target_beta);

} // namespace bellsim

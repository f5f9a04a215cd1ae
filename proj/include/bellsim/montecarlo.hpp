#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <variant>

#include "bellsim/lhv.hpp"
#include "bellsim/phys_model.hpp"
#include "bellsim/postselect.hpp"

namespace bellsim {

/// Raised when an estimate is undefined, e.g. a setting pair with no kept
/// trials. Distinct from std::invalid_argument so callers can tell bad input
/// from a degenerate run.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Event source for the trial engine: quantum predictions at fixed phases, or
/// a local deterministic-strategy mixture.
using EventSource = std::variant<PhaseConfig, LhvModel>;

struct RunConfig {
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  EventSource source = PhaseConfig::chsh_optimal();
  Scheme scheme = Scheme::genuine;
  /// Probability of each setting pair, in pair_index order; sums to 1.
  std::array<double, 4> setting_probs = {0.25, 0.25, 0.25, 0.25};
  /// Worker threads; 0 means hardware concurrency. Results never depend on it.
  unsigned threads = 0;

  void validate() const; // throws std::invalid_argument
};

/// Joint path pattern of the two photons, indexed SS, SL, LS, LL.
enum SlotPattern : int { kSS = 0, kSL = 1, kLS = 2, kLL = 3 };

constexpr int slot_pattern(PathChoice path1, PathChoice path2) {
  return 2 * static_cast<int>(path1) + static_cast<int>(path2);
}

/// Pure counts accumulated over a run. Merging is componentwise addition, so
/// any partition of the trial range yields bit-identical totals.
struct TallySet {
  /// Kept coincidences per pair: [pair_index][a_index][b_index] where a is the
  /// left-side detector sign, b the right-side one, index 0 = -1, 1 = +1.
  std::array<std::array<std::array<std::uint64_t, 2>, 2>, 4> kept{};
  /// Rejected trials per setting pair.
  std::array<std::uint64_t, 4> rejected{};
  /// Path patterns per setting pair, all trials: [pair_index][SlotPattern].
  std::array<std::array<std::uint64_t, 4>, 4> patterns{};
  /// Per-observer detection counts over all trials:
  /// [side][local setting][sign_index]. In the genuine scheme a rejected trial
  /// contributes two detections on one side and none on the other.
  std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2> detections{};
  std::uint64_t trials = 0;

  std::uint64_t pair_trials(int pair_idx) const;
  std::uint64_t kept_total(int pair_idx) const;

  TallySet& operator+=(const TallySet& other);
  bool operator==(const TallySet&) const = default;

  void record(const TrialOutcome& outcome);
};

constexpr int sign_index(int sign) { return sign > 0 ? 1 : 0; }

/// Runs n_trials seeded trials: independent random setting choices, a draw
/// from the source, routing, postselection, tallying. Deterministic given the
/// seed, for any thread count.
TallySet run(const RunConfig& config);

struct ChshEstimate {
  double beta_hat = 0.0;
  double std_error = 0.0; // sqrt of summed per-correlator variances (1 - c^2)/n
  std::array<double, 4> correlators{};
  std::array<std::uint64_t, 4> n_kept{};
};

/// Plug-in estimate of beta from kept counts. Throws EstimationError when a
/// setting pair has no kept trials.
ChshEstimate estimate_chsh(const TallySet& tallies);

/// Empirical SS, SL, LS, LL fractions over all trials.
std::array<double, 4> split_fractions(const TallySet& tallies);

/// Empirical keep fraction per setting pair.
std::array<double, 4> keep_fractions(const TallySet& tallies);

} // namespace bellsim

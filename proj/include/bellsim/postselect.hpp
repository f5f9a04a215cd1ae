#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "bellsim/lhv.hpp"
#include "bellsim/phys_model.hpp"

namespace bellsim {

/// Postselection scheme.
///   franson: both photons stay on their own side; observers keep coincident
///     detections (equal time slots) by comparing records.
///   genuine: the long path crosses to the opposite side, so a trial is kept
///     exactly when the two detections land on different sides; rejection is
///     locally visible as a double detection on one side.
enum class Scheme : std::uint8_t { franson, genuine };

const char* scheme_name(Scheme scheme);

enum class Side : std::uint8_t { left, right };

/// One registered detection: which side's detector bank fired, with which
/// sign, in which time slot (0 = early = S path, 1 = late = L path).
struct DetectionEvent {
  Side side = Side::left;
  int detector_sign = +1;
  int time_slot = 0;

  bool operator==(const DetectionEvent&) const = default;
};

/// Franson routing: photon 1 always lands on the left detectors, photon 2 on
/// the right; the path sets the time slot.
std::pair<DetectionEvent, DetectionEvent> route_franson(PathChoice path1, PathChoice path2,
                                                        int sign1, int sign2);

/// Genuine-scheme routing: the S path of photon 1 (2) ends on the left (right)
/// detectors, the L path on the right (left). The carried sign fires whichever
/// detector pair the photon reaches.
std::pair<DetectionEvent, DetectionEvent> route_genuine(PathChoice path1, PathChoice path2,
                                                        int sign1, int sign2);

std::pair<DetectionEvent, DetectionEvent> route(Scheme scheme, PathChoice path1,
                                                PathChoice path2, int sign1, int sign2);

/// Keep predicate over a routed event pair. Franson: kept iff the time slots
/// coincide. Genuine: kept iff the sides differ, which for consistently routed
/// events coincides with slot equality. Throws std::invalid_argument when the
/// events cannot have been produced by the scheme's router.
bool keep_event(const DetectionEvent& event1, const DetectionEvent& event2, Scheme scheme);

/// Full per-trial record. `kept` is a pure function of the two events and the
/// scheme and can be recomputed at any time.
struct TrialOutcome {
  SettingPair pair;
  DetectionEvent event1, event2; // event1 from photon 1, event2 from photon 2
  bool kept = false;
  Scheme scheme = Scheme::franson;
};

TrialOutcome make_trial(Scheme scheme, const SettingPair& pair, PathChoice path1, int sign1,
                        PathChoice path2, int sign2);

/// Whether a strategy keeps a trial at the given settings under a scheme.
bool strategy_kept(const InstructionSet& set, const SettingPair& pair, Scheme scheme);

struct SettingIndependenceReport {
  std::array<double, 4> keep_prob{}; // keep probability per setting pair
  double max_difference = 0.0;       // max pairwise difference of keep_prob
  bool class_constraint_satisfied = true;

  /// A support strategy whose keep status varies with the settings, with its
  /// per-pair keep pattern. Any entry here certifies that the kept
  /// subensemble depends on the settings.
  struct Witness {
    InstructionSet set;
    std::array<bool, 4> kept_by_pair{};
  };
  std::vector<Witness> setting_dependent_sets;
};

/// Reports whether the postselection of `scheme` acting on `model` selects a
/// subensemble independent of the settings: per-pair keep probabilities, their
/// max difference, per-strategy witnesses of setting dependence, and whether
/// every support strategy belongs to `claimed_class`.
SettingIndependenceReport setting_independence_check(const LhvModel& model, Scheme scheme,
                                                     ConstraintClass claimed_class);

} // namespace bellsim

#include "bellsim/postselect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellsim {

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::franson ? "franson" : "genuine";
}

std::pair<DetectionEvent, DetectionEvent> route_franson(PathChoice path1, PathChoice path2,
                                                        int sign1, int sign2) {
  DetectionEvent event1{Side::left, sign1, time_slot(path1)};
  DetectionEvent event2{Side::right, sign2, time_slot(path2)};
  return {event1, event2};
}

std::pair<DetectionEvent, DetectionEvent> route_genuine(PathChoice path1, PathChoice path2,
                                                        int sign1, int sign2) {
  DetectionEvent event1{path1 == PathChoice::S ? Side::left : Side::right, sign1,
                        time_slot(path1)};
  DetectionEvent event2{path2 == PathChoice::S ? Side::right : Side::left, sign2,
                        time_slot(path2)};
  return {event1, event2};
}

std::pair<DetectionEvent, DetectionEvent> route(Scheme scheme, PathChoice path1,
                                                PathChoice path2, int sign1, int sign2) {
  return scheme == Scheme::franson ? route_franson(path1, path2, sign1, sign2)
                                   : route_genuine(path1, path2, sign1, sign2);
}

bool keep_event(const DetectionEvent& event1, const DetectionEvent& event2, Scheme scheme) {
  if (scheme == Scheme::franson) {
    if (event1.side != Side::left || event2.side != Side::right) {
      throw std::invalid_argument("events inconsistent with franson routing (photon 1 lands "
                                  "left, photon 2 right)");
    }
    return event1.time_slot == event2.time_slot;
  }

  // Genuine scheme: reconstruct the paths and insist side and slot agree.
  const PathChoice path1 = event1.side == Side::left ? PathChoice::S : PathChoice::L;
  const PathChoice path2 = event2.side == Side::right ? PathChoice::S : PathChoice::L;
  if (time_slot(path1) != event1.time_slot || time_slot(path2) != event2.time_slot) {
    throw std::invalid_argument("events inconsistent with genuine-scheme routing");
  }
  const bool sides_differ = event1.side != event2.side;
  const bool slots_equal = event1.time_slot == event2.time_slot;
  if (sides_differ != slots_equal) {
    throw std::logic_error("genuine scheme: side and slot criteria disagree");
  }
  return sides_differ;
}

TrialOutcome make_trial(Scheme scheme, const SettingPair& pair, PathChoice path1, int sign1,
                        PathChoice path2, int sign2) {
  TrialOutcome outcome;
  outcome.pair = pair;
  outcome.scheme = scheme;
  std::tie(outcome.event1, outcome.event2) = route(scheme, path1, path2, sign1, sign2);
  outcome.kept = keep_event(outcome.event1, outcome.event2, scheme);
  return outcome;
}

bool strategy_kept(const InstructionSet& set, const SettingPair& pair, Scheme scheme) {
  const auto [photon1, photon2] = evaluate_set(set, pair);
  const auto [event1, event2] =
      route(scheme, photon1.path, photon2.path, photon1.sign, photon2.sign);
  return keep_event(event1, event2, scheme);
}

SettingIndependenceReport setting_independence_check(const LhvModel& model, Scheme scheme,
                                                     ConstraintClass claimed_class) {
  model.validate();
  SettingIndependenceReport report;

  for (int i = 0; i < 256; ++i) {
    const double w = model.weights[i];
    if (w == 0.0) {
      continue;
    }
    const InstructionSet set = InstructionSet::from_index(i);

    std::array<bool, 4> kept_by_pair{};
    for (int idx = 0; idx < 4; ++idx) {
      kept_by_pair[idx] = strategy_kept(set, pair_from_index(idx), scheme);
      if (kept_by_pair[idx]) {
        report.keep_prob[idx] += w;
      }
    }

    const bool constant =
        kept_by_pair[0] == kept_by_pair[1] && kept_by_pair[1] == kept_by_pair[2] &&
        kept_by_pair[2] == kept_by_pair[3];
    if (!constant) {
      report.setting_dependent_sets.push_back({set, kept_by_pair});
    }
    if (claimed_class == ConstraintClass::path_fixed && !is_path_fixed(set)) {
      report.class_constraint_satisfied = false;
    }
  }

  const auto [lo, hi] = std::minmax_element(report.keep_prob.begin(), report.keep_prob.end());
  report.max_difference = *hi - *lo;
  return report;
}

} // namespace bellsim

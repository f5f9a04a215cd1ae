#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellsim/postselect.hpp"

namespace bellsim {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// Experiment geometry and timing. delta_l is the short/long path-length
/// difference (meters); source_distance is the source-to-analyzer distance
/// whose light-travel time bounds the setting switch rate.
struct GeometryConfig {
  Scheme scheme = Scheme::franson;
  double delta_l = 0.0;            // m
  double coherence_time = 0.0;     // s, single-photon coherence time
  double coincidence_window = 0.0; // s
  double dead_time = 0.0;          // s, detector dead time
  double source_distance = 0.0;    // m
  double switch_frequency = 0.0;   // Hz, random setting modulation
  double pair_rate = 0.0;          // pairs/s
};

enum class CheckStatus { pass, fail, info };

/// Outcome of one requirement check. `margin` is the ratio of the actual
/// quantity to the required one (>= 1 passes); informational entries carry no
/// margin.
struct RequirementCheck {
  std::string id;
  CheckStatus status = CheckStatus::info;
  std::optional<double> margin;
  std::string note;
};

/// Checks a geometry against the requirements of its scheme. Qualitative
/// criteria are quantified by fixed conventions: "order of" as a factor-10
/// band, "much greater" as 100x, "negligible" as <= 1e-2 expected events.
/// Throws std::invalid_argument when any field is non-positive.
std::vector<RequirementCheck> validate(const GeometryConfig& config);

bool all_pass(const std::vector<RequirementCheck>& checks);

const char* check_status_name(CheckStatus status);

} // namespace bellsim

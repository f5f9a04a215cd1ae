#include "bellsim/config_validator.hpp"

#include <cmath>
#include <stdexcept>

namespace bellsim {

const char* check_status_name(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::info: return "info";
  }
  return "?";
}

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be strictly positive");
  }
}

RequirementCheck ratio_check(std::string id, double actual, double required, std::string note) {
  RequirementCheck check;
  check.id = std::move(id);
  check.margin = actual / required;
  check.status = *check.margin >= 1.0 ? CheckStatus::pass : CheckStatus::fail;
  check.note = std::move(note);
  return check;
}

RequirementCheck info_note(std::string id, std::string note) {
  RequirementCheck check;
  check.id = std::move(id);
  check.status = CheckStatus::info;
  check.note = std::move(note);
  return check;
}

} // namespace

std::vector<RequirementCheck> validate(const GeometryConfig& config) {
  require_positive(config.delta_l, "delta_l");
  require_positive(config.coherence_time, "coherence_time");
  require_positive(config.coincidence_window, "coincidence_window");
  require_positive(config.dead_time, "dead_time");
  require_positive(config.source_distance, "source_distance");
  require_positive(config.switch_frequency, "switch_frequency");
  require_positive(config.pair_rate, "pair_rate");

  const double c = kSpeedOfLight;
  std::vector<RequirementCheck> checks;

  if (config.scheme == Scheme::franson) {
    checks.push_back(info_note(
        "I", "simultaneous unpredictable emission, identical interferometers (not numeric)"));
    checks.push_back(ratio_check("II", config.delta_l, c * config.coherence_time,
                                 "path difference exceeds coherence length: dL > c*t_coh"));
    checks.push_back(ratio_check("III", config.delta_l, c * config.coincidence_window,
                                 "S/L separation resolvable: dL > c*dt_coinc"));
    checks.push_back(ratio_check("IV", config.switch_frequency,
                                 c / (10.0 * config.source_distance),
                                 "setting switch of order c/D (factor-10 band)"));
  } else {
    checks.push_back(info_note(
        "I'", "simultaneous unpredictable emission, identical arms (not numeric)"));
    checks.push_back(info_note("II'", "single-photon interference impossible in this setup"));
    checks.push_back(ratio_check("III'", config.delta_l / c, config.dead_time,
                                 "same-side double detections resolvable: dead time < dL'/c"));
    checks.push_back(ratio_check("IV'", 1e-2,
                                 config.pair_rate * config.delta_l / c,
                                 "multi-pair pileup negligible: rate*dL'/c <= 1e-2"));
    checks.push_back(ratio_check("V'-switch", config.switch_frequency,
                                 c / (10.0 * config.source_distance),
                                 "setting switch of order c/D' (factor-10 band)"));
    checks.push_back(ratio_check("V'-span", config.source_distance, 100.0 * config.delta_l,
                                 "D' much greater than dL' (taken as 100x)"));
  }
  return checks;
}

bool all_pass(const std::vector<RequirementCheck>& checks) {
  for (const RequirementCheck& check : checks) {
    if (check.status == CheckStatus::fail) {
      return false;
    }
  }
  return true;
}

} // namespace bellsim

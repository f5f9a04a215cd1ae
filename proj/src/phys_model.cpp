#include "bellsim/phys_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellsim {

double reduce_angle(double radians) {
  if (!std::isfinite(radians)) {
    throw std::invalid_argument("phase must be finite, got " + std::to_string(radians));
  }
  double r = std::remainder(radians, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) {
    r += 2.0 * std::numbers::pi;
  }
  return r;
}

PhaseConfig PhaseConfig::from_radians(double a0, double a1, double b0, double b1) {
  PhaseConfig cfg;
  cfg.phi_a0 = reduce_angle(a0);
  cfg.phi_a1 = reduce_angle(a1);
  cfg.phi_b0 = reduce_angle(b0);
  cfg.phi_b1 = reduce_angle(b1);
  return cfg;
}

PhaseConfig PhaseConfig::chsh_optimal() {
  return from_radians(0.0, std::numbers::pi / 2, -std::numbers::pi / 4, std::numbers::pi / 4);
}

double PhaseConfig::alice_phase(int setting) const {
  if (setting != 0 && setting != 1) {
    throw std::invalid_argument("setting must be 0 or 1");
  }
  return setting == 0 ? phi_a0 : phi_a1;
}

double PhaseConfig::bob_phase(int setting) const {
  if (setting != 0 && setting != 1) {
    throw std::invalid_argument("setting must be 0 or 1");
  }
  return setting == 0 ? phi_b0 : phi_b1;
}

SettingPair::SettingPair(int alice_setting, int bob_setting)
    : alice(alice_setting), bob(bob_setting) {
  if ((alice != 0 && alice != 1) || (bob != 0 && bob != 1)) {
    throw std::invalid_argument("settings must be 0 or 1");
  }
}

SettingPair pair_from_index(int index) {
  if (index < 0 || index > 3) {
    throw std::invalid_argument("pair index must be in 0..3");
  }
  return SettingPair(index / 2, index % 2);
}

const char* pair_label(int pair_idx) {
  static constexpr const char* kLabels[4] = {"A0B0", "A0B1", "A1B0", "A1B1"};
  if (pair_idx < 0 || pair_idx > 3) {
    throw std::invalid_argument("pair index must be in 0..3");
  }
  return kLabels[pair_idx];
}

OutcomePair::OutcomePair(int a_sign, int b_sign) : a(a_sign), b(b_sign) {
  if ((a != -1 && a != 1) || (b != -1 && b != 1)) {
    throw std::invalid_argument("outcomes must be -1 or +1");
  }
}

ChshValue ChshValue::from_correlators(const std::array<double, 4>& c) {
  ChshValue value;
  value.correlators = c;
  value.beta = c[0] + c[1] + c[2] - c[3];
  return value;
}

double qm_joint_probability(const PhaseConfig& phases, const SettingPair& pair,
                            const OutcomePair& outcome) {
  const double phase_sum = phases.alice_phase(pair.alice) + phases.bob_phase(pair.bob);
  return 0.25 * (1.0 + outcome.a * outcome.b * std::cos(phase_sum));
}

double qm_marginal(const PhaseConfig& phases, Party party, int setting, int sign,
                   int other_setting) {
  if (sign != -1 && sign != 1) {
    throw std::invalid_argument("sign must be -1 or +1");
  }
  double total = 0.0;
  for (int other_sign : {-1, +1}) {
    if (party == Party::alice) {
      total += qm_joint_probability(phases, SettingPair(setting, other_setting),
                                    OutcomePair(sign, other_sign));
    } else {
      total += qm_joint_probability(phases, SettingPair(other_setting, setting),
                                    OutcomePair(other_sign, sign));
    }
  }
  return total;
}

double qm_correlator(const PhaseConfig& phases, const SettingPair& pair) {
  return std::cos(phases.alice_phase(pair.alice) + phases.bob_phase(pair.bob));
}

ChshValue qm_chsh(const PhaseConfig& phases) {
  std::array<double, 4> c{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      c[pair_index(i, j)] = qm_correlator(phases, SettingPair(i, j));
    }
  }
  return ChshValue::from_correlators(c);
}

} // namespace bellsim

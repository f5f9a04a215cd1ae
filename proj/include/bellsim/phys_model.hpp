#pragma once

#include <array>
#include <cstdint>

namespace bellsim {

/// Quantum-mechanical ceiling for |beta| (Tsirelson bound).
inline constexpr double kTsirelsonBound = 2.8284271247461902909; // 2*sqrt(2)

/// Classical ceiling for |beta| under the CHSH inequality.
inline constexpr double kChshBound = 2.0;

/// Normalizes an angle to (-pi, pi]. Throws std::invalid_argument on non-finite input.
double reduce_angle(double radians);

enum class Party : std::uint8_t { alice, bob };

/// The four analyzer phases, in radians, reduced to (-pi, pi].
struct PhaseConfig {
  double phi_a0 = 0.0;
  double phi_a1 = 0.0;
  double phi_b0 = 0.0;
  double phi_b1 = 0.0;

  /// Builds a config from raw radians, reducing each phase to (-pi, pi].
  static PhaseConfig from_radians(double a0, double a1, double b0, double b1);

  /// Phases (0, pi/2, -pi/4, pi/4) which maximize beta at 2*sqrt(2).
  static PhaseConfig chsh_optimal();

  double alice_phase(int setting) const;
  double bob_phase(int setting) const;
};

/// A pair of local measurement settings, each 0 or 1.
struct SettingPair {
  int alice = 0;
  int bob = 0;

  SettingPair() = default;
  SettingPair(int alice_setting, int bob_setting);
};

/// Flat index 0..3 for a setting pair, ordered (0,0), (0,1), (1,0), (1,1).
constexpr int pair_index(int alice_setting, int bob_setting) {
  return 2 * alice_setting + bob_setting;
}
inline int pair_index(const SettingPair& pair) { return pair_index(pair.alice, pair.bob); }
SettingPair pair_from_index(int index);

/// Human-readable label for a setting pair, e.g. "A0B1".
const char* pair_label(int pair_idx);

/// A pair of dichotomic outcomes, each -1 or +1.
struct OutcomePair {
  int a = +1;
  int b = +1;

  OutcomePair() = default;
  OutcomePair(int a_sign, int b_sign);
};

/// Beta and the four correlators it is assembled from.
/// correlators are indexed by pair_index; beta = c00 + c01 + c10 - c11.
struct ChshValue {
  double beta = 0.0;
  std::array<double, 4> correlators{};

  static ChshValue from_correlators(const std::array<double, 4>& c);
};

/// Joint detection probability for coincident events:
/// P(A_i=a, B_j=b) = 1/4 * [1 + a*b*cos(phi_Ai + phi_Bj)].
double qm_joint_probability(const PhaseConfig& phases, const SettingPair& pair,
                            const OutcomePair& outcome);

/// Single-party marginal, computed as the sum of qm_joint_probability over the
/// other party's outcomes (identically 1/2 for any other_setting).
double qm_marginal(const PhaseConfig& phases, Party party, int setting, int sign,
                   int other_setting = 0);

/// Two-party correlator <A_i B_j> = cos(phi_Ai + phi_Bj).
double qm_correlator(const PhaseConfig& phases, const SettingPair& pair);

/// Quantum prediction for beta at the given phases.
ChshValue qm_chsh(const PhaseConfig& phases);

} // namespace bellsim

#include <doctest.h>

#include <stdexcept>

#include <map>
#include <string>

#include "bellsim/config_validator.hpp"

using namespace bellsim;

namespace {

GeometryConfig genuine_1km() {
  GeometryConfig config;
  config.scheme = Scheme::genuine;
  config.delta_l = 0.3;            // 30 cm arm difference
  config.coherence_time = 1e-12;
  config.coincidence_window = 1e-10;
  config.dead_time = 1e-9;         // 1 ns detectors
  config.source_distance = 1000.0; // 1 km analyzer distance
  config.switch_frequency = 3e5;   // 300 kHz random modulation
  config.pair_rate = 1e6;
  return config;
}

GeometryConfig franson_tabletop() {
  GeometryConfig config;
  config.scheme = Scheme::franson;
  config.delta_l = 0.6;
  config.coherence_time = 1e-12;    // c*t_coh ~ 0.3 mm
  config.coincidence_window = 1e-9; // c*dt ~ 0.3 m
  config.dead_time = 1e-9;
  config.source_distance = 10.0;
  config.switch_frequency = 1e7;    // c/D = 30 MHz; within the factor-10 band
  config.pair_rate = 1e6;
  return config;
}

std::map<std::string, RequirementCheck> by_id(const std::vector<RequirementCheck>& checks) {
  std::map<std::string, RequirementCheck> out;
  for (const auto& check : checks) {
    out[check.id] = check;
  }
  return out;
}

} // namespace

TEST_CASE("the 1 ns / 30 cm / 300 kHz / 1 km reference point passes") {
  const auto checks = validate(genuine_1km());
  CHECK(all_pass(checks));
  const auto map = by_id(checks);

  // dead time 1 ns against dL'/c just above 1 ns: a borderline pass
  CHECK(map.at("III'").status == CheckStatus::pass);
  CHECK(*map.at("III'").margin > 1.0);
  CHECK(*map.at("III'").margin < 1.01);

  // 300 kHz switching at D' = 1 km sits exactly at c/D' ~ 300 kHz
  CHECK(map.at("V'-switch").status == CheckStatus::pass);
  CHECK(map.at("V'-span").status == CheckStatus::pass);
  CHECK(map.at("IV'").status == CheckStatus::pass);
  CHECK(map.at("I'").status == CheckStatus::info);
  CHECK(map.at("II'").status == CheckStatus::info);
}

TEST_CASE("franson requirements pass on a consistent tabletop geometry") {
  const auto checks = validate(franson_tabletop());
  CHECK(all_pass(checks));
  const auto map = by_id(checks);
  CHECK(map.at("II").status == CheckStatus::pass);
  CHECK(map.at("III").status == CheckStatus::pass);
  CHECK(map.at("IV").status == CheckStatus::pass);
  CHECK(map.at("I").status == CheckStatus::info);
}

TEST_CASE("violations are flagged") {
  // path difference half a coherence length: single-photon interference
  GeometryConfig franson = franson_tabletop();
  franson.delta_l = kSpeedOfLight * franson.coherence_time / 2.0;
  franson.coincidence_window = 1e-12;
  const auto franson_checks = validate(franson);
  CHECK_FALSE(all_pass(franson_checks));
  CHECK(by_id(franson_checks).at("II").status == CheckStatus::fail);

  // dead time too long for the arm difference
  GeometryConfig genuine = genuine_1km();
  genuine.dead_time = 2e-9;
  CHECK(by_id(validate(genuine)).at("III'").status == CheckStatus::fail);

  // analyzer distance not much greater than the arm difference
  genuine = genuine_1km();
  genuine.source_distance = 20.0;
  CHECK(by_id(validate(genuine)).at("V'-span").status == CheckStatus::fail);

  // pair rate high enough for pileup
  genuine = genuine_1km();
  genuine.pair_rate = 1e12;
  CHECK(by_id(validate(genuine)).at("IV'").status == CheckStatus::fail);
}

TEST_CASE("monotonicity: growing margins never break a passing check") {
  GeometryConfig franson = franson_tabletop();
  double previous_ii = 0.0;
  double previous_iii = 0.0;
  for (double scale : {1.0, 2.0, 5.0, 10.0, 100.0}) {
    GeometryConfig scaled = franson;
    scaled.delta_l *= scale;
    const auto map = by_id(validate(scaled));
    CHECK(map.at("II").status == CheckStatus::pass);
    CHECK(map.at("III").status == CheckStatus::pass);
    CHECK(*map.at("II").margin >= previous_ii);
    CHECK(*map.at("III").margin >= previous_iii);
    previous_ii = *map.at("II").margin;
    previous_iii = *map.at("III").margin;
  }

  GeometryConfig genuine = genuine_1km();
  double previous_span = 0.0;
  for (double scale : {1.0, 3.0, 10.0, 50.0}) {
    GeometryConfig scaled = genuine;
    scaled.source_distance *= scale;
    const auto map = by_id(validate(scaled));
    CHECK(map.at("V'-span").status == CheckStatus::pass);
    CHECK(*map.at("V'-span").margin >= previous_span);
    previous_span = *map.at("V'-span").margin;
  }
}

TEST_CASE("non-positive fields are rejected") {
  GeometryConfig config = genuine_1km();
  config.delta_l = 0.0;
  CHECK_THROWS_AS(validate(config), std::invalid_argument);
  config = genuine_1km();
  config.pair_rate = -1.0;
  CHECK_THROWS_AS(validate(config), std::invalid_argument);
  config = genuine_1km();
  config.switch_frequency = 0.0;
  CHECK_THROWS_AS(validate(config), std::invalid_argument);
}

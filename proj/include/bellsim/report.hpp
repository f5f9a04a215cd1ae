#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "bellsim/config_validator.hpp"
#include "bellsim/montecarlo.hpp"
#include "bellsim/strategy_search.hpp"

namespace bellsim {

inline constexpr int kReportSchemaVersion = 1;

/// Everything a simulate invocation produces. Timing fields are optional so
/// reports can be made byte-reproducible.
struct RunReport {
  // config echo (execution details like thread count are deliberately absent)
  Scheme scheme = Scheme::genuine;
  std::string source_kind; // "qm" or "lhv"
  std::optional<std::array<double, 4>> phases;
  std::optional<double> p;
  std::optional<std::string> model_file;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::array<double, 4> setting_probs{};

  TallySet tallies;
  ChshEstimate estimate;
  std::array<double, 4> splits{};        // SS, SL, LS, LL
  std::array<double, 4> keep_fraction{}; // per setting pair

  std::optional<ChshValue> exact; // model prediction, when defined
  std::optional<std::array<double, 4>> exact_keep_prob;

  std::optional<double> wall_time_s;
  std::optional<std::string> timestamp;
};

nlohmann::ordered_json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::ordered_json& j);

/// Plot-ready single-row CSV; numbers carry 15 significant digits.
std::string to_csv(const RunReport& report);

nlohmann::ordered_json to_json(const SearchResult& result, ConstraintClass constraint,
                               Scheme scheme);
std::string to_csv(const SearchResult& result, ConstraintClass constraint, Scheme scheme);

nlohmann::ordered_json to_json(const FakeViolationReport& report);
std::string to_csv(const FakeViolationReport& report);

nlohmann::ordered_json to_json(const std::vector<RequirementCheck>& checks,
                               const GeometryConfig& config);

/// ISO-8601 UTC timestamp, e.g. "2026-08-08T12:34:56Z".
std::string utc_timestamp_now();

/// Shortest text for a double that parses back to at least 15 significant
/// digits of the value ("%.15g").
std::string format_g15(double value);

} // namespace bellsim

#include "bellsim/report.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>

namespace bellsim {

namespace {

using nlohmann::ordered_json;

constexpr const char* kPatternNames[4] = {"ss", "sl", "ls", "ll"};

ordered_json pairs_array(const TallySet& tallies) {
  ordered_json pairs = ordered_json::array();
  for (int idx = 0; idx < 4; ++idx) {
    ordered_json entry;
    entry["pair"] = pair_label(idx);
    entry["kept"] = tallies.kept_total(idx);
    entry["rejected"] = tallies.rejected[idx];
    entry["counts"] = {{"pp", tallies.kept[idx][1][1]},
                       {"pm", tallies.kept[idx][1][0]},
                       {"mp", tallies.kept[idx][0][1]},
                       {"mm", tallies.kept[idx][0][0]}};
    ordered_json patterns;
    for (int pat = 0; pat < 4; ++pat) {
      patterns[kPatternNames[pat]] = tallies.patterns[idx][pat];
    }
    entry["patterns"] = patterns;
    pairs.push_back(entry);
  }
  return pairs;
}

ordered_json detections_array(const TallySet& tallies) {
  ordered_json detections = ordered_json::array();
  for (int side = 0; side < 2; ++side) {
    for (int setting = 0; setting < 2; ++setting) {
      ordered_json entry;
      entry["side"] = side == 0 ? "left" : "right";
      entry["setting"] = setting;
      entry["minus"] = tallies.detections[side][setting][0];
      entry["plus"] = tallies.detections[side][setting][1];
      detections.push_back(entry);
    }
  }
  return detections;
}

ordered_json estimate_json(const ChshEstimate& estimate) {
  ordered_json j;
  j["beta_hat"] = estimate.beta_hat;
  j["std_error"] = estimate.std_error;
  ordered_json correlators = ordered_json::array();
  for (int idx = 0; idx < 4; ++idx) {
    correlators.push_back({{"pair", pair_label(idx)},
                           {"value", estimate.correlators[idx]},
                           {"n_kept", estimate.n_kept[idx]}});
  }
  j["correlators"] = correlators;
  return j;
}

ordered_json fractions_json(const std::array<double, 4>& values,
                            const char* const names[4]) {
  ordered_json j;
  for (int idx = 0; idx < 4; ++idx) {
    j[names[idx]] = values[idx];
  }
  return j;
}

std::array<double, 4> fractions_from_json(const ordered_json& j, const char* const names[4]) {
  std::array<double, 4> values{};
  for (int idx = 0; idx < 4; ++idx) {
    values[idx] = j.at(names[idx]).get<double>();
  }
  return values;
}

constexpr const char* kPairNames[4] = {"A0B0", "A0B1", "A1B0", "A1B1"};

} // namespace

std::string format_g15(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.15g", value);
  return buffer;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

nlohmann::ordered_json to_json(const RunReport& report) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = "simulate";

  ordered_json config;
  config["scheme"] = scheme_name(report.scheme);
  config["source"] = report.source_kind;
  if (report.phases) {
    config["phases"] = *report.phases;
  }
  if (report.p) {
    config["p"] = *report.p;
  }
  if (report.model_file) {
    config["model_file"] = *report.model_file;
  }
  config["trials"] = report.trials;
  config["seed"] = report.seed;
  config["setting_probs"] = report.setting_probs;
  j["config"] = config;

  ordered_json tallies;
  tallies["trials"] = report.tallies.trials;
  tallies["pairs"] = pairs_array(report.tallies);
  tallies["detections"] = detections_array(report.tallies);
  j["tallies"] = tallies;

  j["estimate"] = estimate_json(report.estimate);
  j["split_fractions"] = fractions_json(report.splits, kPatternNames);
  j["keep_fraction"] = fractions_json(report.keep_fraction, kPairNames);

  if (report.exact) {
    ordered_json exact;
    exact["beta"] = report.exact->beta;
    exact["correlators"] = report.exact->correlators;
    if (report.exact_keep_prob) {
      exact["keep_prob"] = *report.exact_keep_prob;
    }
    j["exact"] = exact;
  }
  if (report.wall_time_s) {
    j["wall_time_s"] = *report.wall_time_s;
  }
  if (report.timestamp) {
    j["timestamp"] = *report.timestamp;
  }
  return j;
}

RunReport run_report_from_json(const nlohmann::ordered_json& j) {
  if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw std::invalid_argument("unsupported report schema version");
  }
  RunReport report;
  const auto& config = j.at("config");
  report.scheme =
      config.at("scheme").get<std::string>() == "franson" ? Scheme::franson : Scheme::genuine;
  report.source_kind = config.at("source").get<std::string>();
  if (config.contains("phases")) {
    report.phases = config.at("phases").get<std::array<double, 4>>();
  }
  if (config.contains("p")) {
    report.p = config.at("p").get<double>();
  }
  if (config.contains("model_file")) {
    report.model_file = config.at("model_file").get<std::string>();
  }
  report.trials = config.at("trials").get<std::uint64_t>();
  report.seed = config.at("seed").get<std::uint64_t>();
  report.setting_probs = config.at("setting_probs").get<std::array<double, 4>>();

  const auto& tallies = j.at("tallies");
  report.tallies.trials = tallies.at("trials").get<std::uint64_t>();
  const auto& pairs = tallies.at("pairs");
  for (int idx = 0; idx < 4; ++idx) {
    const auto& entry = pairs.at(idx);
    const auto& counts = entry.at("counts");
    report.tallies.kept[idx][1][1] = counts.at("pp").get<std::uint64_t>();
    report.tallies.kept[idx][1][0] = counts.at("pm").get<std::uint64_t>();
    report.tallies.kept[idx][0][1] = counts.at("mp").get<std::uint64_t>();
    report.tallies.kept[idx][0][0] = counts.at("mm").get<std::uint64_t>();
    report.tallies.rejected[idx] = entry.at("rejected").get<std::uint64_t>();
    for (int pat = 0; pat < 4; ++pat) {
      report.tallies.patterns[idx][pat] =
          entry.at("patterns").at(kPatternNames[pat]).get<std::uint64_t>();
    }
  }
  const auto& detections = tallies.at("detections");
  for (const auto& entry : detections) {
    const int side = entry.at("side").get<std::string>() == "left" ? 0 : 1;
    const int setting = entry.at("setting").get<int>();
    report.tallies.detections[side][setting][0] = entry.at("minus").get<std::uint64_t>();
    report.tallies.detections[side][setting][1] = entry.at("plus").get<std::uint64_t>();
  }

  const auto& estimate = j.at("estimate");
  report.estimate.beta_hat = estimate.at("beta_hat").get<double>();
  report.estimate.std_error = estimate.at("std_error").get<double>();
  for (int idx = 0; idx < 4; ++idx) {
    const auto& entry = estimate.at("correlators").at(idx);
    report.estimate.correlators[idx] = entry.at("value").get<double>();
    report.estimate.n_kept[idx] = entry.at("n_kept").get<std::uint64_t>();
  }

  report.splits = fractions_from_json(j.at("split_fractions"), kPatternNames);
  report.keep_fraction = fractions_from_json(j.at("keep_fraction"), kPairNames);

  if (j.contains("exact")) {
    ChshValue exact;
    exact.beta = j.at("exact").at("beta").get<double>();
    exact.correlators = j.at("exact").at("correlators").get<std::array<double, 4>>();
    report.exact = exact;
    if (j.at("exact").contains("keep_prob")) {
      report.exact_keep_prob = j.at("exact").at("keep_prob").get<std::array<double, 4>>();
    }
  }
  if (j.contains("wall_time_s")) {
    report.wall_time_s = j.at("wall_time_s").get<double>();
  }
  if (j.contains("timestamp")) {
    report.timestamp = j.at("timestamp").get<std::string>();
  }
  return report;
}

std::string to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "scheme,source,trials,seed,beta_hat,std_error";
  for (int idx = 0; idx < 4; ++idx) {
    out << ",c_" << kPairNames[idx];
  }
  for (int idx = 0; idx < 4; ++idx) {
    out << ",n_kept_" << kPairNames[idx];
  }
  for (int idx = 0; idx < 4; ++idx) {
    out << ",keep_" << kPairNames[idx];
  }
  out << ",frac_ss,frac_sl,frac_ls,frac_ll,exact_beta\n";

  out << scheme_name(report.scheme) << ',' << report.source_kind << ',' << report.trials << ','
      << report.seed << ',' << format_g15(report.estimate.beta_hat) << ','
      << format_g15(report.estimate.std_error);
  for (int idx = 0; idx < 4; ++idx) {
    out << ',' << format_g15(report.estimate.correlators[idx]);
  }
  for (int idx = 0; idx < 4; ++idx) {
    out << ',' << report.estimate.n_kept[idx];
  }
  for (int idx = 0; idx < 4; ++idx) {
    out << ',' << format_g15(report.keep_fraction[idx]);
  }
  for (int idx = 0; idx < 4; ++idx) {
    out << ',' << format_g15(report.splits[idx]);
  }
  out << ',' << (report.exact ? format_g15(report.exact->beta) : "");
  out << '\n';
  return out.str();
}

nlohmann::ordered_json to_json(const SearchResult& result, ConstraintClass constraint,
                               Scheme scheme) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = "enumerate";
  j["class"] = constraint == ConstraintClass::path_fixed ? "path-fixed" : "path-dependent";
  j["scheme"] = scheme_name(scheme);
  j["max_beta"] = result.max_beta;
  j["min_beta"] = result.min_beta;
  j["max_mechanism"] = result.max_mechanism;
  j["min_mechanism"] = result.min_mechanism;
  if (result.argmax) {
    j["max_witness"] = result.argmax->to_string();
  }
  if (result.argmin) {
    j["min_witness"] = result.argmin->to_string();
  }
  j["evaluated"] = result.evaluated;
  j["feasible"] = result.feasible;
  j["excluded"] = result.excluded;
  return j;
}

std::string to_csv(const SearchResult& result, ConstraintClass constraint, Scheme scheme) {
  std::ostringstream out;
  out << "class,scheme,max_beta,min_beta,evaluated,feasible,excluded\n";
  out << (constraint == ConstraintClass::path_fixed ? "path-fixed" : "path-dependent") << ','
      << scheme_name(scheme) << ',' << format_g15(result.max_beta) << ','
      << format_g15(result.min_beta) << ',' << result.evaluated << ',' << result.feasible << ','
      << result.excluded << '\n';
  return out.str();
}

nlohmann::ordered_json to_json(const FakeViolationReport& report) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = "fake";
  j["target"] = report.target;
  j["p"] = report.p;
  ordered_json exact;
  exact["beta"] = report.exact_beta;
  exact["keep_prob"] = report.exact_keep_prob;
  j["exact"] = exact;
  ordered_json mc;
  mc["trials"] = report.trials;
  mc["seed"] = report.seed;
  mc["beta_hat"] = report.estimate.beta_hat;
  mc["std_error"] = report.estimate.std_error;
  mc["keep_fraction"] = report.mc_keep_fraction;
  j["monte_carlo"] = mc;
  return j;
}

std::string to_csv(const FakeViolationReport& report) {
  std::ostringstream out;
  out << "target,p,exact_beta,mc_beta_hat,mc_std_error,trials,seed\n";
  out << format_g15(report.target) << ',' << format_g15(report.p) << ','
      << format_g15(report.exact_beta) << ',' << format_g15(report.estimate.beta_hat) << ','
      << format_g15(report.estimate.std_error) << ',' << report.trials << ',' << report.seed
      << '\n';
  return out.str();
}

nlohmann::ordered_json to_json(const std::vector<RequirementCheck>& checks,
                               const GeometryConfig& config) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = "validate";
  j["scheme"] = scheme_name(config.scheme);
  ordered_json entries = ordered_json::array();
  for (const RequirementCheck& check : checks) {
    ordered_json entry;
    entry["id"] = check.id;
    entry["status"] = check_status_name(check.status);
    if (check.margin) {
      entry["margin"] = *check.margin;
    }
    entry["note"] = check.note;
    entries.push_back(entry);
  }
  j["checks"] = entries;
  j["all_pass"] = all_pass(checks);
  return j;
}

} // namespace bellsim

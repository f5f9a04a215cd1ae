// bellsim: event-level Bell-CHSH simulator CLI.
//
// Subcommands:
//   simulate   seeded Monte Carlo run (quantum or strategy-mixture source)
//   enumerate  exact extremal beta over deterministic strategy classes
//   fake       forge a target beta with the coincidence-postselection mixture
//   validate   check experiment geometry/timing requirements
//
// Exit codes: 0 success, 1 validation failure, 2 invalid input, 3 runtime failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellsim/config_validator.hpp"
#include "bellsim/lhv.hpp"
#include "bellsim/model_io.hpp"
#include "bellsim/montecarlo.hpp"
#include "bellsim/phys_model.hpp"
#include "bellsim/postselect.hpp"
#include "bellsim/report.hpp"
#include "bellsim/strategy_search.hpp"

namespace {

using bellsim::Scheme;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitRuntimeFailure = 3;

struct SimulateArgs {
  std::string scheme = "genuine";
  std::string source = "qm";
  std::vector<double> phases;
  std::optional<double> p;
  std::string model_file;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::vector<double> setting_probs;
  unsigned threads = 0;
  std::string out_path;
  std::string format = "json";
  bool no_timestamp = false;
};

struct EnumerateArgs {
  std::string constraint = "path-fixed";
  std::string scheme = "genuine";
  std::string out_path;
  std::string format = "json";
};

struct FakeArgs {
  double target = 0.0;
  std::uint64_t trials = 200000;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "json";
};

struct ValidateArgs {
  std::string config_path;
  std::string out_path;
};

Scheme parse_scheme(const std::string& name) {
  return name == "franson" ? Scheme::franson : Scheme::genuine;
}

void write_output(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot write output file '" + path + "'");
  }
  out << content;
}

void emit_report(const std::string& out_path, const std::string& format,
                 const nlohmann::ordered_json& json, const std::string& csv) {
  if (out_path.empty()) {
    return;
  }
  write_output(out_path, format == "csv" ? csv : json.dump(2) + "\n");
}

// Flat key/value config file: '[section]' headers, 'key = value' lines,
// '#' or ';' comments. validate reads the [geometry] section.
std::map<std::string, std::string> read_config_section(const std::string& path,
                                                       const std::string& section) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  std::map<std::string, std::string> values;
  std::string line;
  std::string current;
  int line_no = 0;
  auto trim = [](std::string text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
      return std::string();
    }
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) {
      line.erase(comment);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unterminated section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": want 'key = value'");
    }
    if (current == section) {
      values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
  }
  return values;
}

double config_number(const std::map<std::string, std::string>& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end()) {
    throw std::invalid_argument("config missing key '" + key + "' in [geometry]");
  }
  try {
    std::size_t used = 0;
    const double value = std::stod(it->second, &used);
    if (used != it->second.size()) {
      throw std::invalid_argument("");
    }
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + it->second + "'");
  }
}

int run_simulate(const SimulateArgs& args) {
  bellsim::RunConfig config;
  config.n_trials = args.trials;
  config.seed = args.seed;
  config.scheme = parse_scheme(args.scheme);
  config.threads = args.threads;
  if (!args.setting_probs.empty()) {
    if (args.setting_probs.size() != 4) {
      throw std::invalid_argument("--setting-probs wants 4 values");
    }
    std::copy(args.setting_probs.begin(), args.setting_probs.end(),
              config.setting_probs.begin());
  }

  bellsim::RunReport report;
  report.scheme = config.scheme;
  report.source_kind = args.source;
  report.trials = args.trials;
  report.seed = args.seed;
  report.setting_probs = config.setting_probs;

  if (args.source == "qm") {
    if (args.phases.size() != 4) {
      throw std::invalid_argument("--source qm wants --phases a0,a1,b0,b1 (radians)");
    }
    const auto phases = bellsim::PhaseConfig::from_radians(args.phases[0], args.phases[1],
                                                           args.phases[2], args.phases[3]);
    config.source = phases;
    report.phases = {phases.phi_a0, phases.phi_a1, phases.phi_b0, phases.phi_b1};
    report.exact = bellsim::qm_chsh(phases);
  } else {
    bellsim::LhvModel model;
    if (args.p && !args.model_file.empty()) {
      throw std::invalid_argument("--p and --model-file are mutually exclusive");
    }
    if (args.p) {
      model = bellsim::forgery_model(*args.p);
      report.p = *args.p;
    } else if (!args.model_file.empty()) {
      model = bellsim::load_model(args.model_file);
      report.model_file = args.model_file;
    } else {
      throw std::invalid_argument("--source lhv wants --p or --model-file");
    }
    config.source = model;
    // Keep rule is path coincidence under both schemes, so the exact value
    // applies either way. Degenerate models simply omit the prediction.
    try {
      const auto exact = bellsim::coincidence_beta_exact(model);
      report.exact = exact.chsh;
      report.exact_keep_prob = exact.keep_prob;
    } catch (const std::domain_error&) {
    }
  }

  config.validate();

  const auto start = std::chrono::steady_clock::now();
  const bellsim::TallySet tallies = bellsim::run(config);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  report.tallies = tallies;
  report.estimate = bellsim::estimate_chsh(tallies); // throws EstimationError on zero-kept pair
  report.splits = bellsim::split_fractions(tallies);
  report.keep_fraction = bellsim::keep_fractions(tallies);
  if (!args.no_timestamp) {
    report.wall_time_s = elapsed.count();
    report.timestamp = bellsim::utc_timestamp_now();
  }

  emit_report(args.out_path, args.format, bellsim::to_json(report), bellsim::to_csv(report));

  std::printf("beta_hat = %.6f +/- %.6f  (%llu trials, seed %llu, %s/%s)\n",
              report.estimate.beta_hat, report.estimate.std_error,
              static_cast<unsigned long long>(args.trials),
              static_cast<unsigned long long>(args.seed), args.scheme.c_str(),
              args.source.c_str());
  if (report.exact) {
    std::printf("exact beta = %.6f\n", report.exact->beta);
  }
  return kExitOk;
}

int run_enumerate(const EnumerateArgs& args) {
  const auto constraint = args.constraint == "path-fixed"
                              ? bellsim::ConstraintClass::path_fixed
                              : bellsim::ConstraintClass::path_setting_dependent;
  const Scheme scheme = parse_scheme(args.scheme);
  const bellsim::SearchResult result = bellsim::extremal_beta(constraint, scheme);

  emit_report(args.out_path, args.format, bellsim::to_json(result, constraint, scheme),
              bellsim::to_csv(result, constraint, scheme));

  std::printf("class=%s scheme=%s\n", args.constraint.c_str(), args.scheme.c_str());
  std::printf("strategies evaluated=%zu feasible=%zu excluded=%zu\n", result.evaluated,
              result.feasible, result.excluded);
  std::printf("max_beta = %g  (%s%s%s)\n", result.max_beta, result.max_mechanism.c_str(),
              result.argmax ? ": " : "",
              result.argmax ? result.argmax->to_string().c_str() : "");
  std::printf("min_beta = %g  (%s%s%s)\n", result.min_beta, result.min_mechanism.c_str(),
              result.argmin ? ": " : "",
              result.argmin ? result.argmin->to_string().c_str() : "");
  return kExitOk;
}

int run_fake(const FakeArgs& args) {
  const bellsim::FakeViolationReport report =
      bellsim::verify_fake_violation(args.target, args.trials, args.seed);

  emit_report(args.out_path, args.format, bellsim::to_json(report), bellsim::to_csv(report));

  std::printf("target beta = %.6f -> mixture p = %.6f\n", report.target, report.p);
  std::printf("exact beta = %.6f\n", report.exact_beta);
  std::printf("mc beta_hat = %.6f +/- %.6f  (%llu trials, seed %llu)\n",
              report.estimate.beta_hat, report.estimate.std_error,
              static_cast<unsigned long long>(report.trials),
              static_cast<unsigned long long>(report.seed));
  std::printf("keep fraction per pair =");
  for (double f : report.mc_keep_fraction) {
    std::printf(" %.4f", f);
  }
  std::printf("\n");
  return kExitOk;
}

int run_validate(const ValidateArgs& args) {
  const auto values = read_config_section(args.config_path, "geometry");
  bellsim::GeometryConfig config;
  const auto scheme_it = values.find("scheme");
  if (scheme_it == values.end()) {
    throw std::invalid_argument("config missing key 'scheme' in [geometry]");
  }
  if (scheme_it->second != "franson" && scheme_it->second != "genuine") {
    throw std::invalid_argument("config 'scheme' must be franson or genuine");
  }
  config.scheme = parse_scheme(scheme_it->second);
  config.delta_l = config_number(values, "delta_l");
  config.coherence_time = config_number(values, "coherence_time");
  config.coincidence_window = config_number(values, "coincidence_window");
  config.dead_time = config_number(values, "dead_time");
  config.source_distance = config_number(values, "source_distance");
  config.switch_frequency = config_number(values, "switch_frequency");
  config.pair_rate = config_number(values, "pair_rate");

  const auto checks = bellsim::validate(config);
  if (!args.out_path.empty()) {
    write_output(args.out_path, bellsim::to_json(checks, config).dump(2) + "\n");
  }

  for (const auto& check : checks) {
    if (check.margin) {
      std::printf("%-9s %-4s margin=%-12.4g %s\n", check.id.c_str(),
                  bellsim::check_status_name(check.status), *check.margin, check.note.c_str());
    } else {
      std::printf("%-9s %-4s %-19s %s\n", check.id.c_str(),
                  bellsim::check_status_name(check.status), "", check.note.c_str());
    }
  }
  const bool ok = bellsim::all_pass(checks);
  std::printf("result: %s\n", ok ? "all requirements satisfied" : "REQUIREMENTS VIOLATED");
  return ok ? kExitOk : kExitValidationFailed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-level Bell-CHSH simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run a seeded Monte Carlo experiment");
  simulate->add_option("--scheme", sim.scheme, "postselection scheme")
      ->check(CLI::IsMember({"franson", "genuine"}));
  simulate->add_option("--source", sim.source, "event source")
      ->check(CLI::IsMember({"qm", "lhv"}));
  simulate->add_option("--phases", sim.phases, "analyzer phases a0,a1,b0,b1 in radians")
      ->delimiter(',')
      ->expected(4);
  double p_value = 0.0;
  CLI::Option* p_opt = simulate->add_option("--p", p_value, "forgery mixture parameter")
                           ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--model-file", sim.model_file, "strategy mixture file");
  simulate->add_option("--trials", sim.trials, "number of trials")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  simulate->add_option("--seed", sim.seed, "rng seed");
  simulate->add_option("--setting-probs", sim.setting_probs,
                       "setting pair probabilities (A0B0,A0B1,A1B0,A1B1)")
      ->delimiter(',')
      ->expected(4);
  simulate->add_option("--threads", sim.threads, "worker threads (0 = auto)");
  simulate->add_option("--out", sim.out_path, "write report to file");
  simulate->add_option("--format", sim.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->add_flag("--no-timestamp", sim.no_timestamp,
                     "omit timestamp and wall time for reproducible reports");

  EnumerateArgs enumerate;
  CLI::App* enum_cmd = app.add_subcommand("enumerate", "extremal beta over strategy classes");
  enum_cmd->add_option("--class", enumerate.constraint, "constraint class")
      ->check(CLI::IsMember({"path-dependent", "path-fixed"}));
  enum_cmd->add_option("--scheme", enumerate.scheme, "postselection scheme")
      ->check(CLI::IsMember({"franson", "genuine"}));
  enum_cmd->add_option("--out", enumerate.out_path, "write report to file");
  enum_cmd->add_option("--format", enumerate.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  FakeArgs fake;
  CLI::App* fake_cmd = app.add_subcommand("fake", "forge a target beta via postselection");
  fake_cmd->add_option("--target", fake.target, "target beta in [-4, 4]")
      ->required()
      ->check(CLI::Range(-4.0, 4.0));
  fake_cmd->add_option("--trials", fake.trials, "Monte Carlo trials")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  fake_cmd->add_option("--seed", fake.seed, "rng seed");
  fake_cmd->add_option("--out", fake.out_path, "write report to file");
  fake_cmd->add_option("--format", fake.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  ValidateArgs validate;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check geometry/timing requirements");
  validate_cmd->add_option("--config", validate.config_path, "config file")->required();
  validate_cmd->add_option("--out", validate.out_path, "write report to file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    app.exit(help);
    return kExitOk;
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitBadInput;
  }

  if (p_opt->count() > 0) {
    sim.p = p_value;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(sim);
    }
    if (enum_cmd->parsed()) {
      return run_enumerate(enumerate);
    }
    if (fake_cmd->parsed()) {
      return run_fake(fake);
    }
    if (validate_cmd->parsed()) {
      return run_validate(validate);
    }
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitBadInput;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "runtime error: %s\n", err.what());
    return kExitRuntimeFailure;
  }
  return kExitBadInput;
}

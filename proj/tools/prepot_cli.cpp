// prepot: command-line front end for scenario verification.
//
//   prepot verify <scenario> [--format json|csv] [--out PATH] [--count N]
//                            [--seed S] [--tolerance T] [--threads N]
//   prepot list-catalog
//   prepot run-catalog <name|all> [--out DIR] [--count N] [--seed S]
//   prepot oracle <scenario> [--points N]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration, parse or
// I/O error, 3 numeric anomaly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "prepot/error.hpp"
#include "prepot/runner.hpp"
#include "prepot/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAnomaly = 3;

struct Overrides {
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  unsigned threads = 0;
};

void apply(const Overrides& o, prepot::Scenario& s) {
  if (o.count) {
    if (*o.count == 0) throw prepot::ScenarioError(prepot::ScenarioError::Kind::semantic, "--count must be positive");
    s.sampling.count = *o.count;
  }
  if (o.seed) s.sampling.seed = *o.seed;
  if (o.tolerance) s.tolerances.relative = *o.tolerance;
}

// Writes to `path` or stdout; an unopenable file is an I/O error.
template <class Fn>
void write_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw prepot::ScenarioError(prepot::ScenarioError::Kind::io, "cannot write '" + path + "'");
  fn(out);
  out.flush();
  if (!out) throw prepot::ScenarioError(prepot::ScenarioError::Kind::io, "error writing '" + path + "'");
}

int worst(int a, int b) {
  // Precedence: configuration error, anomaly, failure, pass.
  const std::map<int, int> rank = {{kExitPass, 0}, {kExitFail, 1}, {kExitAnomaly, 2}, {kExitConfig, 3}};
  return rank.at(a) >= rank.at(b) ? a : b;
}

int cmd_verify(const std::string& file, const std::string& format, const std::string& out,
               const Overrides& o) {
  prepot::Scenario s = prepot::load_scenario(file);
  apply(o, s);
  const prepot::CheckReport report = prepot::run_scenario(s, {o.threads});
  const auto fmt = format == "csv" ? prepot::ReportFormat::csv : prepot::ReportFormat::json;
  write_output(out, [&](std::ostream& os) { prepot::emit_report(report, fmt, os); });
  for (const auto& c : report.checks) {
    if (c.anomalies > 0) {
      std::cerr << "ANOMALY " << c.id << " (" << c.anomalies << " non-finite points)\n";
    } else if (!c.pass) {
      std::cerr << "FAIL " << c.id << " (max_rel " << c.max_rel << ", bound " << c.bound << ")\n";
    }
  }
  return prepot::exit_code(report);
}

int cmd_list_catalog() {
  for (const auto& s : prepot::catalog()) {
    std::cout << s.name << "  [" << s.chart.name << "]  " << s.description << '\n';
  }
  return kExitPass;
}

int cmd_run_catalog(const std::string& name, const std::string& out_dir, const Overrides& o) {
  std::vector<prepot::Scenario> scenarios;
  if (name == "all") {
    scenarios = prepot::catalog();
  } else {
    try {
      scenarios.push_back(prepot::catalog_scenario(name));
    } catch (const std::out_of_range& e) {
      throw prepot::ScenarioError(prepot::ScenarioError::Kind::semantic, e.what());
    }
  }
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  int code = kExitPass;
  for (auto& s : scenarios) {
    apply(o, s);
    const prepot::CheckReport report = prepot::run_scenario(s, {o.threads});
    const int c = prepot::exit_code(report);
    code = worst(code, c);
    std::cout << (c == kExitPass ? "PASS " : c == kExitAnomaly ? "ANOM " : "FAIL ") << s.name;
    for (const auto& rec : report.checks) {
      if (!rec.pass) std::cout << "  " << rec.id;
    }
    std::cout << '\n';
    if (!out_dir.empty()) {
      const auto path = (std::filesystem::path(out_dir) / (s.name + ".json")).string();
      write_output(path, [&](std::ostream& os) { prepot::emit_report(report, prepot::ReportFormat::json, os); });
    }
  }
  return code;
}

int cmd_oracle(const std::string& file, std::size_t points, const std::string& out) {
  const prepot::Scenario s = prepot::load_scenario(file);
  const auto rows = prepot::oracle_audit(s, points);
  write_output(out, [&](std::ostream& os) { prepot::emit_oracle_audit(s, rows, os); });
  for (const auto& r : rows) {
    if (!r.pass) return kExitFail;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification of pre-potential constructions of massless fields"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string file;
  std::string format = "json";
  std::string out;

  auto* verify = app.add_subcommand("verify", "Run every check a scenario file declares");
  verify->add_option("scenario", file, "Scenario file")->required();
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", out, "Report destination (default stdout)");
  verify->add_option("--count", overrides.count, "Number of sample points");
  verify->add_option("--seed", overrides.seed, "Sampling seed");
  verify->add_option("--tolerance", overrides.tolerance, "Relative tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--threads", overrides.threads, "Worker threads (0 = hardware)");

  auto* list = app.add_subcommand("list-catalog", "List the shipped scenarios");

  std::string name;
  std::string out_dir;
  auto* run = app.add_subcommand("run-catalog", "Run one shipped scenario or all of them");
  run->add_option("name", name, "Scenario name or 'all'")->required();
  run->add_option("--out", out_dir, "Directory for per-scenario JSON reports");
  run->add_option("--count", overrides.count, "Number of sample points");
  run->add_option("--seed", overrides.seed, "Sampling seed");
  run->add_option("--threads", overrides.threads, "Worker threads (0 = hardware)");

  std::size_t oracle_points = 8;
  auto* oracle = app.add_subcommand("oracle", "Compare jet derivatives with finite differences");
  oracle->add_option("scenario", file, "Scenario file")->required();
  oracle->add_option("--points", oracle_points, "Sample points to audit")->check(CLI::PositiveNumber);
  oracle->add_option("--out", out, "Report destination (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*verify) return cmd_verify(file, format, out, overrides);
    if (*list) return cmd_list_catalog();
    if (*run) return cmd_run_catalog(name, out_dir, overrides);
    if (*oracle) return cmd_oracle(file, oracle_points, out);
  } catch (const prepot::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

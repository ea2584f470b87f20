// saitoh-lab: scenario runner for kernel inequalities on products of planar
// domains. Subcommands: run (execute a config, write JSON + CSV reports),
// sweep (one scenario across truncation degrees), report (re-emit a stored
// report in json or csv).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "saitoh/scenario.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<saitoh::Scenario> load_scenarios(const std::string& path) {
  const saitoh::ConfigFile file = saitoh::parse_config(slurp(path));
  return saitoh::scenarios_from_config(file);
}

int effective_jobs(int cli_jobs) {
  if (const char* env = std::getenv("SAITOH_LAB_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed SAITOH_LAB_JOBS\n";
    }
  }
  return std::max(1, cli_jobs);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
}

int cmd_run(const std::string& config, const std::string& out_dir, int jobs) {
  const std::vector<saitoh::Scenario> scenarios = load_scenarios(config);
  const std::vector<saitoh::RunReport> reports =
      saitoh::run_scenarios(scenarios, effective_jobs(jobs));

  fs::create_directories(out_dir);
  std::ostringstream json, csv;
  saitoh::write_report_json(reports, json);
  saitoh::write_report_csv(reports, csv);
  write_file(fs::path(out_dir) / "report.json", json.str());
  write_file(fs::path(out_dir) / "report.csv", csv.str());

  bool all_pass = true;
  for (const saitoh::RunReport& r : reports) {
    std::cout << r.id << ": " << saitoh::status_string(r.status);
    if (r.status != saitoh::RunReport::Status::HypothesisViolation)
      std::cout << "  lhs=" << saitoh::detail::fmt17(r.lhs)
                << " rhs=" << saitoh::detail::fmt17(r.rhs)
                << " ratio=" << saitoh::detail::fmt17(r.ratio);
    std::cout << "\n";
    for (const std::string& note : r.notes) std::cout << "    " << note << "\n";
    std::cerr << "  [" << r.id << " took " << r.wall_ms << " ms]\n";
    all_pass = all_pass && r.passed();
  }
  std::cout << (all_pass ? "all scenarios passed" : "FAILURES present") << "\n";
  return all_pass ? 0 : 1;
}

int cmd_sweep(const std::string& config, const std::string& scenario_id,
              const std::vector<int>& degrees, const std::string& out_file) {
  std::vector<saitoh::Scenario> scenarios = load_scenarios(config);
  auto it = std::find_if(scenarios.begin(), scenarios.end(),
                         [&](const saitoh::Scenario& s) { return s.id == scenario_id; });
  if (it == scenarios.end()) {
    std::cerr << "unknown scenario id '" << scenario_id << "'\n";
    return 2;
  }
  saitoh::Scenario s = *it;
  if (!degrees.empty()) s.degrees = degrees;
  s.degree = s.degrees.back();
  const saitoh::RunReport rep = run_scenario(s);
  if (!rep.notes.empty() && rep.sweep.empty()) {
    for (const std::string& n : rep.notes) std::cerr << n << "\n";
    return 1;
  }
  std::ostringstream csv;
  saitoh::write_sweep_csv(rep, csv);
  if (out_file.empty())
    std::cout << csv.str();
  else
    write_file(out_file, csv.str());
  std::string msg;
  if ((s.theorem != "m2-oracle" && s.theorem != "concavity") &&
      !saitoh::sweep_monotone(rep.sweep, &msg)) {
    std::cerr << "monotonicity violation: " << msg << "\n";
    return 1;
  }
  return 0;
}

int cmd_report(const std::string& format, const std::string& in_file,
               const std::string& out_file) {
  const nlohmann::json doc = nlohmann::json::parse(slurp(in_file));
  std::vector<saitoh::RunReport> reports;
  for (const nlohmann::json& item : doc) {
    saitoh::RunReport r;
    r.id = item.at("id").get<std::string>();
    const auto num = [&](const char* key) {
      return item.at(key).is_null() ? std::numeric_limits<double>::quiet_NaN()
                                    : item.at(key).get<double>();
    };
    r.lhs = num("lhs");
    r.rhs = num("rhs");
    r.ratio = num("ratio");
    const std::string status = item.at("status").get<std::string>();
    r.status = status == "pass" ? saitoh::RunReport::Status::Pass
               : status == "fail" ? saitoh::RunReport::Status::Fail
                                  : saitoh::RunReport::Status::HypothesisViolation;
    for (const nlohmann::json& n : item.at("notes")) r.notes.push_back(n.get<std::string>());
    for (const nlohmann::json& row : item.at("sweep"))
      r.sweep.push_back(saitoh::SweepRow{row.at("n").get<int>(), row.at("lhs").get<double>(),
                                         row.at("rhs").get<double>()});
    reports.push_back(std::move(r));
  }
  std::ostringstream os;
  if (format == "json")
    saitoh::write_report_json(reports, os);
  else
    saitoh::write_report_csv(reports, os);
  if (out_file.empty())
    std::cout << os.str();
  else
    write_file(out_file, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Hardy/Bergman kernel inequalities"};
  app.require_subcommand(1);

  std::string config, out_dir = "saitoh-lab-out";
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "execute every scenario in a config");
  run->add_option("config", config, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory for report.json / report.csv");
  run->add_option("--jobs", jobs, "parallel scenarios (env SAITOH_LAB_JOBS overrides)");

  std::string sweep_id, sweep_out;
  std::vector<int> degrees;
  CLI::App* sweep = app.add_subcommand("sweep", "one scenario across truncation degrees");
  sweep->add_option("config", config, "scenario config file")->required();
  sweep->add_option("--scenario", sweep_id, "scenario id")->required();
  sweep->add_option("--degrees", degrees, "degree list, e.g. --degrees 4 8 16")
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "CSV output file (default stdout)");

  std::string format = "json", report_in = "saitoh-lab-out/report.json", report_out;
  CLI::App* report = app.add_subcommand("report", "re-emit a stored report");
  report->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  report->add_option("--in", report_in, "stored report.json");
  report->add_option("--out", report_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(config, out_dir, jobs);
    if (sweep->parsed()) return cmd_sweep(config, sweep_id, degrees, sweep_out);
    if (report->parsed()) return cmd_report(format, report_in, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

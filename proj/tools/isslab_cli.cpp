#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isslab/builtins.hpp"
#include "isslab/errors.hpp"
#include "isslab/oracles.hpp"
#include "isslab/runner.hpp"
#include "isslab/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

isslab::Scenario resolve(const std::string& ref) {
  if (isslab::is_builtin(ref)) return isslab::builtin_scenario(ref);
  return isslab::load_scenario(ref);
}

void emit(const json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  const fs::path path(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw isslab::Error(isslab::ErrorCode::invalid_argument, "cannot write " + out);
  os << doc.dump(2) << '\n';
}

/// With several scenarios each report goes to <stem>_<scenario>.json.
fs::path report_path(const std::string& out, const std::string& scenario, bool many) {
  if (!many) return out;
  const fs::path p(out);
  return p.parent_path() / (p.stem().string() + "_" + scenario + p.extension().string());
}

int run_verb(isslab::RunMode mode, const std::vector<std::string>& refs, const std::string& out,
             unsigned jobs) {
  std::vector<isslab::Scenario> scenarios;
  for (const auto& r : refs) scenarios.push_back(resolve(r));
  const auto final_reports = isslab::run_batch(scenarios, jobs, mode);
  int code = isslab::exit_pass;
  const bool many = final_reports.size() > 1;
  json all = json::array();
  for (const auto& r : final_reports) {
    code = std::max(code, r.exit_code);
    if (!out.empty()) isslab::write_report(r, report_path(out, r.scenario, many));
    all.push_back(r.to_json());
  }
  if (out.empty()) std::cout << (many ? all : all.front()).dump(2) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted sup-norm decay certificates and input-to-state bounds for 1-D parabolic "
               "equations"};
  app.require_subcommand(1);

  std::vector<std::string> refs;
  std::string out;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto add_run = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("scenario", refs, "built-in name or scenario JSON file")->required();
    sub->add_option("--out", out, "report JSON path; CSV traces are written beside it");
    sub->add_option("--jobs", jobs, "worker threads for several scenarios")
        ->check(CLI::PositiveNumber);
    return sub;
  };
  auto* certify = add_run("certify", "resolve the decay certificate only");
  auto* simulate = add_run("simulate", "integrate the trajectory only");
  auto* check = add_run("check", "certificate, trajectory and envelope check per zeta");

  std::string sweep_ref;
  std::vector<double> zeta_grid;
  bool fractions = false;
  auto* sweep = app.add_subcommand("sweep", "tightness sup lhs/rhs for each zeta");
  sweep->add_option("scenario", sweep_ref, "built-in name or scenario JSON file")->required();
  sweep->add_option("--zeta-grid", zeta_grid, "zeta values, comma separated")
      ->required()
      ->delimiter(',');
  sweep->add_flag("--fractions", fractions, "read --zeta-grid as multiples of sigma");
  sweep->add_option("--out", out, "JSON path; a CSV table is written beside it");

  std::uint64_t seed = 0;
  int trials = 200;
  auto* oracles = app.add_subcommand("oracles", "sup-norm derivative oracles on random fields");
  oracles->add_option("--seed", seed, "random seed")->required();
  oracles->add_option("--trials", trials, "fields per oracle")->check(CLI::PositiveNumber);
  oracles->add_option("--out", out, "report JSON path");

  auto* list = app.add_subcommand("list-builtins", "names of the built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : isslab::exit_model_error;
  }

  try {
    if (*certify) return run_verb(isslab::RunMode::certify, refs, out, jobs);
    if (*simulate) return run_verb(isslab::RunMode::simulate, refs, out, jobs);
    if (*check) return run_verb(isslab::RunMode::check, refs, out, jobs);
    if (*sweep) {
      const auto scenario = resolve(sweep_ref);
      std::vector<double> zetas = zeta_grid;
      if (fractions) {
        const double sigma = isslab::scenario_certificate(scenario).sigma;
        for (double& z : zetas) z *= sigma;
      }
      const auto rows = isslab::sweep_zeta(scenario, zetas);
      json doc = {{"scenario", scenario.name}, {"rows", json::array()}};
      bool within = true;
      for (const auto& r : rows) {
        doc["rows"].push_back({{"zeta", r.zeta},
                               {"tightness", r.tightness},
                               {"max_excess", r.max_excess},
                               {"violations", r.violations}});
        within = within && r.violations == 0;
      }
      doc["pass"] = within;
      emit(doc, out);
      if (!out.empty()) {
        const fs::path p(out);
        std::ofstream csv(p.parent_path() / (p.stem().string() + ".csv"));
        csv << "zeta,tightness,max_excess,violations\n" << std::setprecision(17);
        for (const auto& r : rows) {
          csv << r.zeta << ',' << r.tightness << ',' << r.max_excess << ',' << r.violations << '\n';
        }
      }
      return within ? isslab::exit_pass : isslab::exit_bound_violation;
    }
    if (*oracles) {
      const auto report = isslab::derivative_oracles(seed, trials);
      emit(report.to_json(), out);
      return report.pass() ? isslab::exit_pass : isslab::exit_bound_violation;
    }
    if (*list) {
      json doc = json::array();
      for (const auto& b : isslab::list_builtins()) {
        doc.push_back({{"name", b.name}, {"description", b.description}});
      }
      emit(doc, out);
      return isslab::exit_pass;
    }
  } catch (const isslab::Error& e) {
    std::cerr << "isslab: " << e.what() << '\n';
    return e.code() == isslab::ErrorCode::infeasible_certificate
               ? isslab::exit_infeasible_certificate
               : isslab::exit_model_error;
  } catch (const std::exception& e) {
    std::cerr << "isslab: " << e.what() << '\n';
    return isslab::exit_model_error;
  }
  return isslab::exit_model_error;
}

// harp: experiment runner for the product-torus harmonic analysis library.
//
//   harp run <config.json>       run an experiment, write report + CSV
//   harp freeze <config.json>    run and record the measured regression values
//   harp validate <config.json>  check a config without running
//   harp list                    enumerate experiment kinds
//
// Exit codes: 0 pass, 1 check failure, 2 config error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "harp/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

std::string report_basename(const json& config) {
  if (config.contains("output")) return config["output"].get<std::string>();
  return config["experiment"].get<std::string>();
}

int run_mode(const std::string& config_path, const std::string& fixtures_dir,
             const std::string& out_dir, bool freeze) {
  json config = load_json(config_path);
  harp::validate_config(config);
  const std::string kind = config["experiment"].get<std::string>();

  json fixtures = json::object();
  const fs::path fixture_path = fs::path(fixtures_dir) / (kind + ".json");
  if (!freeze && fs::exists(fixture_path)) fixtures = load_json(fixture_path.string());

  const auto t0 = std::chrono::steady_clock::now();
  harp::ExperimentResult result = harp::run_experiment(config, fixtures, freeze);
  const auto t1 = std::chrono::steady_clock::now();

  // wall clock and versions live under meta, outside the deterministic body
  result.report["meta"] = {
      {"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()},
      {"library", "harp 0.1.0"}};

  fs::create_directories(out_dir);
  const std::string base = (fs::path(out_dir) / report_basename(config)).string();
  {
    std::ofstream out(base + ".report.json");
    out << result.report.dump(2) << "\n";
  }
  {
    std::ofstream out(base + ".csv", std::ios::binary);
    out << result.csv;
  }
  if (freeze && result.report.contains("frozen")) {
    fs::create_directories(fixtures_dir);
    std::ofstream out(fixture_path);
    out << result.report["frozen"].dump(2) << "\n";
    std::cout << "frozen " << fixture_path.string() << "\n";
  }

  for (const auto& check : result.report.value("checks", json::array()))
    std::cout << (check["pass"].get<bool>() ? "[PASS] " : "[FAIL] ")
              << check["name"].get<std::string>() << " = " << check["value"].dump() << " ("
              << check["bound"].get<std::string>() << ")\n";
  std::cout << (result.pass ? "PASS " : "FAIL ") << kind << " -> " << base << ".report.json\n";
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harp: multiparameter harmonic-analysis experiments on product tori"};
  app.require_subcommand(1);

  std::string config_path, fixtures_dir = "fixtures", out_dir = "out";

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--fixtures", fixtures_dir, "directory of frozen regression values");
  run->add_option("--output", out_dir, "report output directory");

  auto* freeze = app.add_subcommand("freeze", "run and record regression fixtures");
  freeze->add_option("config", config_path, "JSON experiment config")->required();
  freeze->add_option("--fixtures", fixtures_dir, "fixture directory to write");
  freeze->add_option("--output", out_dir, "report output directory");

  auto* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", config_path, "JSON experiment config")->required();

  auto* list = app.add_subcommand("list", "list experiment kinds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::cout << harp::list_experiments();
      return 0;
    }
    if (validate->parsed()) {
      harp::validate_config(load_json(config_path));
      std::cout << "config ok\n";
      return 0;
    }
    return run_mode(config_path, fixtures_dir, out_dir, freeze->parsed());
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

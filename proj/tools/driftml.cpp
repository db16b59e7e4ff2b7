#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>

#include "driftml/experiment.hpp"
#include "driftml/report.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kRuntimeError = 3 };

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, std::string out) {
  auto config = driftml::load_experiment_config(config_path);
  if (seed) config.budget.seed = *seed;
  if (out.empty()) out = (std::filesystem::path("runs") / std::filesystem::path(config_path).stem()).string();
  const auto result = driftml::run_experiment(config, out);
  std::cout << driftml::render_comparison(result.reports);
  spdlog::info("reports written to {}", out);
  return kOk;
}

int cmd_report(const std::string& dir, const std::string& out) {
  const auto table = driftml::render_delta_table(driftml::read_batch_series(dir));
  std::cout << table;
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << table;
  }
  return kOk;
}

int cmd_stagger(std::size_t n, std::uint64_t seed, double noise, const std::string& out) {
  auto cfg = driftml::default_stagger_config(n, seed);
  cfg.noise_rate = noise;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw driftml::ConfigError(e.what());
  }
  const auto batch = driftml::generate_stagger(cfg);
  if (out.empty() || out == "-") {
    driftml::write_csv(std::cout, batch);
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    driftml::write_csv(f, batch);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drift-aware AutoML experiment runner"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only log warnings and errors");

  std::string config_path, run_out;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run every strategy of an experiment config and write reports");
  run->add_option("config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the search seed of the config");
  run->add_option("--out", run_out, "Report directory (default runs/<config name>)");

  std::string report_dir, report_out;
  auto* report = app.add_subcommand("report", "Print per-batch metric deltas against the base strategy");
  report->add_option("dir", report_dir, "Directory written by `run`")->required();
  report->add_option("--out", report_out, "Also write the table to this file");

  std::size_t n = 70000;
  std::uint64_t stagger_seed = 1;
  double noise = 0.0;
  std::string stagger_out;
  auto* stagger = app.add_subcommand("stagger", "Write the default STAGGER stream as CSV");
  stagger->add_option("-n,--instances", n, "Number of instances")->check(CLI::PositiveNumber);
  stagger->add_option("--seed", stagger_seed, "Generator seed");
  stagger->add_option("--noise", noise, "Label noise rate in [0, 0.5)");
  stagger->add_option("--out", stagger_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("driftml"));
  spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    if (*run) return cmd_run(config_path, seed, run_out);
    if (*report) return cmd_report(report_dir, report_out);
    if (*stagger) return cmd_stagger(n, stagger_seed, noise, stagger_out);
  } catch (const driftml::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kConfigError;
  } catch (const driftml::DataError& e) {
    spdlog::error("data error: {}", e.what());
    return kDataError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntimeError;
  }
  return kRuntimeError;
}

// Command-line driver for the waveform-relaxation experiment runner.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ebk/errors.hpp"
#include "ebk/experiment.hpp"

namespace {

int run_rows(std::vector<ebk::ExperimentConfig> configs, const std::string& out_dir,
             const std::string& format) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  std::vector<ebk::ReportRow> rows;
  bool any_failed = false;
  for (const auto& cfg : configs) {
    rows.push_back(ebk::run_experiment(cfg, out_dir));
    any_failed |= rows.back().failed;
    std::cerr << (rows.back().failed ? "[failed] " : "[done]   ") << rows.back().label
              << "\n";
  }
  const std::string text = ebk::emit(rows, format);
  std::cout << text;
  if (!out_dir.empty()) {
    std::ofstream f(out_dir + "/report." + (format == "markdown" ? "md" : "csv"));
    f << text;
  }
  return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear waveform relaxation with an exponential block Krylov "
               "inner solver: experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "markdown", suite;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "run one experiment from a config file");
  run->add_option("--config", config_path, "key = value config file")->required();
  run->add_option("--set", overrides, "override, e.g. --set tol=1e-4");
  run->add_option("--out", out_dir, "directory for report and trace files");
  run->add_option("--format", format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));

  auto* bench = app.add_subcommand("bench", "run a canonical suite");
  bench->add_option("--suite", suite, "burgers, bratu or heat")->required();
  bench->add_option("--out", out_dir, "directory for report and trace files");
  bench->add_option("--format", format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ebk::ExperimentConfig cfg = ebk::parse_config(config_path);
      for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw ebk::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      cfg.validate();
      return run_rows({cfg}, out_dir, format);
    }
    return run_rows(ebk::bench_suite(suite), out_dir, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

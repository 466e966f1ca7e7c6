// fqtsim: command-line front end for the two-photon collective-noise
// transmission simulator. Subcommands: run, trace, sweep, validate.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "fqt/config.hpp"
#include "fqt/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fqt::ConfigError("cannot write output file: " + path);
  out << content;
}

int cmd_run(const std::string& config_path, const std::string& output_override,
            int jobs) {
  fqt::ExperimentSpec spec = fqt::parse_experiment_file(config_path);
  if (!output_override.empty()) spec.output = output_override;
  const fqt::Report report = fqt::run_experiment(spec, jobs);
  write_file(spec.output, fqt::report_to_json(report, spec));
  std::printf("success=%.6f +/- %.6f  fidelity=%.6f",
              report.success_probability.mean,
              report.success_probability.stderr_of_mean,
              report.mean_fidelity_kept.mean);
  if (report.oracle_max_deviation)
    std::printf("  oracle_dev=%.3g", *report.oracle_max_deviation);
  std::printf("  report=%s\n", spec.output.c_str());
  return kExitOk;
}

int cmd_trace(const std::string& config_path, const std::string& stage) {
  const fqt::ExperimentSpec spec = fqt::parse_experiment_file(config_path);
  if (spec.sweep)
    throw fqt::ConfigError("trace: config must not contain a sweep section");
  if (spec.trials != 1)
    throw fqt::ConfigError("trace: config must set run.trials = 1");
  if (spec.noise.kind == fqt::NoiseKind::Haar)
    throw fqt::ConfigError(
        "trace: config needs a fixed noise matrix (haar is not)");
  if (spec.input.size() != 1)
    throw fqt::ConfigError("trace: config must use a single pure input");

  const fqt::NoiseUnitary u = fqt::sample(spec.noise, 0);
  const fqt::PipelineResult result =
      fqt::run_pipeline(spec.input.front().input, u, spec.decoder);
  for (const fqt::StageSnapshot& snapshot : result.trace) {
    if (snapshot.name == stage) {
      std::cout << fqt::format_stage_table(snapshot.state, stage);
      return kExitOk;
    }
  }
  std::string known;
  for (const fqt::StageSnapshot& snapshot : result.trace) {
    if (!known.empty()) known += ", ";
    known += snapshot.name;
  }
  throw fqt::ConfigError("trace: unknown stage \"" + stage +
                         "\" (valid stages: " + known + ")");
}

int cmd_sweep(const std::string& config_path, const std::string& output_path,
              int jobs) {
  const fqt::ExperimentSpec spec = fqt::parse_experiment_file(config_path);
  if (!spec.sweep)
    throw fqt::ConfigError("sweep: config has no run.sweep section");
  const auto table = fqt::run_sweep(spec, jobs);
  write_file(output_path, fqt::sweep_csv(table));
  std::printf("rows=%zu  csv=%s\n", table.size(), output_path.c_str());
  return kExitOk;
}

int cmd_validate() {
  const auto results = fqt::run_validation_suite();
  bool all_passed = true;
  for (const fqt::CheckResult& result : results) {
    std::printf("%s %s: %s\n", result.passed ? "PASS" : "FAIL",
                result.name.c_str(), result.detail.c_str());
    all_passed = all_passed && result.passed;
  }
  return all_passed ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulator for faithful single-qubit transmission through collective "
      "noise using a frequency-tagged reference photon"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::string csv_path = "sweep.csv";
  std::string stage;
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  run->add_option("--output", output_path, "Report path (overrides config)");
  run->add_option("--jobs", jobs,
                  "Worker threads (hint only; results are identical)");

  CLI::App* trace = app.add_subcommand(
      "trace", "Print the amplitude table at a pipeline stage");
  trace->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  trace->add_option("--stage", stage, "Stage name")->required();

  CLI::App* sweep =
      app.add_subcommand("sweep", "Run a parameter sweep, emit CSV");
  sweep->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  sweep->add_option("--output", csv_path, "CSV path");
  sweep->add_option("--jobs", jobs,
                    "Worker threads (hint only; results are identical)");

  CLI::App* validate =
      app.add_subcommand("validate", "Run the built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    return app.exit(error);
  }

  try {
    if (run->parsed()) return cmd_run(config_path, output_path, jobs);
    if (trace->parsed()) return cmd_trace(config_path, stage);
    if (sweep->parsed()) return cmd_sweep(config_path, csv_path, jobs);
    if (validate->parsed()) return cmd_validate();
  } catch (const fqt::ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitInternal;
  }
  return kExitConfig;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fqt/config.hpp"
#include "fqt/validate.hpp"

using namespace fqt;

namespace {

std::string minimal_config(const std::string& extra = "") {
  return R"({
    "input": {"alpha_re": 0.6, "alpha_im": 0.0, "beta_re": 0.0, "beta_im": 0.8},
    "noise": {"kind": "haar", "seed": 5})" +
         extra + "\n}";
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[1024];
  while (fgets(buffer, sizeof(buffer), pipe)) result.output += buffer;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string cli_binary() {
  const char* path = std::getenv("FQTSIM_BIN");
  REQUIRE_MESSAGE(path != nullptr, "FQTSIM_BIN must point at the fqtsim CLI");
  return path;
}

std::filesystem::path scratch_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "fqtsim_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_config(const std::string& name,
                                   const std::string& content) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("defaults are filled for a minimal config") {
  const ExperimentSpec spec = parse_experiment_json(minimal_config());
  CHECK(spec.trials == 1000);
  CHECK(spec.seed() == 5);
  CHECK(spec.decoder.variant == DecoderVariant::FrequencyDualFs);
  CHECK(spec.decoder.fs_efficiency == 1.0);
  CHECK(spec.decoder.eraser_transmission == 0.5);
  CHECK(spec.decoder.with_hwp0);
  CHECK(spec.filter.is_all());
  CHECK(!spec.oracle_check);
  CHECK(spec.output == "report.json");
  REQUIRE(spec.input.size() == 1);
  CHECK(spec.input.front().input.beta == Complex{0.0, 0.8});
}

TEST_CASE("out-of-range decoder eta is named in the error") {
  const std::string config = minimal_config(R"(,
    "decoder": {"eta": 1.5})");
  CHECK_THROWS_WITH_AS(parse_experiment_json(config),
                       doctest::Contains("decoder.eta"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their section") {
  CHECK_THROWS_WITH_AS(parse_experiment_json(minimal_config(R"(,
    "decoder": {"efficiency": 0.5})")),
                       doctest::Contains("decoder: unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment_json(R"({
    "input": {"alpha_re": 1.0, "alpha_im": 0, "beta_re": 0, "beta_im": 0,
              "gamma_re": 0.1},
    "noise": {"kind": "bitflip"}
  })"),
                       doctest::Contains("input: unknown key"), ConfigError);
}

TEST_CASE("unnormalized input is rejected") {
  CHECK_THROWS_WITH_AS(parse_experiment_json(R"({
    "input": {"alpha_re": 1.0, "alpha_im": 0, "beta_re": 0.5, "beta_im": 0},
    "noise": {"kind": "bitflip"}
  })"),
                       doctest::Contains("input"), ConfigError);
}

TEST_CASE("ensemble parsing checks weights") {
  const std::string config = R"({
    "input": {"ensemble": [
      {"weight": 0.5, "alpha_re": 1.0, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
      {"weight": 0.2, "alpha_re": 0.0, "alpha_im": 0, "beta_re": 1, "beta_im": 0}
    ]},
    "noise": {"kind": "bitflip"}
  })";
  CHECK_THROWS_WITH_AS(parse_experiment_json(config),
                       doctest::Contains("weights"), ConfigError);
}

TEST_CASE("noise section parses every family") {
  CHECK(parse_experiment_json(minimal_config()).noise.kind == NoiseKind::Haar);
  const ExperimentSpec dephasing = parse_experiment_json(R"({
    "input": {"alpha_re": 1, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
    "noise": {"kind": "dephasing", "phi": 0.7}
  })");
  CHECK(dephasing.noise.kind == NoiseKind::Dephasing);
  CHECK(dephasing.noise.phi == 0.7);

  const ExperimentSpec fixed = parse_experiment_json(R"({
    "input": {"alpha_re": 1, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
    "noise": {"kind": "fixed",
              "delta1_re": 0, "delta1_im": 0, "delta2_re": 1, "delta2_im": 0,
              "eta1_re": 1, "eta1_im": 0, "eta2_re": 0, "eta2_im": 0}
  })");
  CHECK(fixed.noise.kind == NoiseKind::Fixed);

  CHECK_THROWS_WITH_AS(parse_experiment_json(R"({
    "input": {"alpha_re": 1, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
    "noise": {"kind": "fixed",
              "delta1_re": 1, "delta1_im": 0, "delta2_re": 1, "delta2_im": 0,
              "eta1_re": 1, "eta1_im": 0, "eta2_re": 0, "eta2_im": 0}
  })"),
                       doctest::Contains("unitary"), ConfigError);

  CHECK_THROWS_WITH_AS(parse_experiment_json(R"({
    "input": {"alpha_re": 1, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
    "noise": {"kind": "gaussian"}
  })"),
                       doctest::Contains("noise.kind"), ConfigError);
}

TEST_CASE("filters and sweeps parse and validate") {
  const ExperimentSpec spec = parse_experiment_json(minimal_config(R"(,
    "run": {"trials": 7,
            "branch_filter": ["3x_3y", "4x_4y"],
            "outcome_filter": ["plus_x"],
            "sweep": {"parameter": "eta", "values": [0.0, 0.5, 1.0]}})"));
  CHECK(spec.trials == 7);
  CHECK(spec.filter.branches == std::array<bool, 4>{true, true, false, false});
  CHECK(spec.filter.outcomes == std::array<bool, 2>{true, false});
  REQUIRE(spec.sweep.has_value());
  CHECK(spec.sweep->parameter == SweepSpec::Parameter::Eta);
  CHECK(spec.sweep->values == std::vector<double>{0.0, 0.5, 1.0});

  CHECK_THROWS_WITH_AS(parse_experiment_json(minimal_config(R"(,
    "run": {"branch_filter": ["3z_3y"]})")),
                       doctest::Contains("branch_filter"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment_json(minimal_config(R"(,
    "run": {"sweep": {"parameter": "eta", "values": []}})")),
                       doctest::Contains("values"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment_json(minimal_config(R"(,
    "run": {"sweep": {"parameter": "eta", "values": [2.0]}})")),
                       doctest::Contains("domain"), ConfigError);
}

TEST_CASE("report JSON round-trips byte for byte") {
  ExperimentSpec spec = parse_experiment_json(minimal_config(R"(,
    "run": {"trials": 12, "oracle_check": true, "per_trial_records": true})"));
  const Report report = run_experiment(spec);
  const std::string emitted = report_to_json(report, spec);
  const auto parsed = nlohmann::ordered_json::parse(emitted);
  CHECK(parsed.dump(2) + "\n" == emitted);
  CHECK(parsed.at("trials") == 12);
  CHECK(parsed.at("discard_model_note") == "labeled-photon approximation");
  CHECK(parsed.at("per_trial").size() == 12);
  // Ideal decoder: the reported success probability is 1/2.
  CHECK(std::abs(parsed.at("success_probability").at("mean").get<double>() -
                 0.5) < 1e-12);
  CHECK(parsed.at("oracle_max_deviation").get<double>() < 1e-12);
}

TEST_CASE("format_double emits shortest round-trip forms") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.21125) == "0.21125");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("cli: run writes a report and prints the summary line") {
  const auto report_path = scratch_dir() / "run_report.json";
  const auto config = write_config("run.json", R"({
    "input": {"alpha_re": 0.6, "alpha_im": 0.0, "beta_re": 0.0, "beta_im": 0.8},
    "noise": {"kind": "haar", "seed": 1},
    "decoder": {"variant": "frequency_dual_fs", "eta": 0.65},
    "run": {"trials": 30, "oracle_check": true, "output": ")" +
                                               report_path.string() + R"("}
  })");
  const CommandResult result =
      run_command(cli_binary() + " run " + config.string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("success=0.211250") != std::string::npos);
  CHECK(result.output.find("fidelity=1.000000") != std::string::npos);
  CHECK(result.output.find("oracle_dev=") != std::string::npos);
  const auto parsed = nlohmann::ordered_json::parse(read_file(report_path));
  CHECK(std::abs(parsed.at("success_probability").at("mean").get<double>() -
                 0.21125) < 1e-12);
  CHECK(parsed.at("oracle_max_deviation").get<double>() < 1e-12);
}

TEST_CASE("cli: invalid config exits 2 naming the field") {
  const auto config = write_config("bad_eta.json", R"({
    "input": {"alpha_re": 1, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
    "noise": {"kind": "haar"},
    "decoder": {"eta": 1.5}
  })");
  const CommandResult result =
      run_command(cli_binary() + " run " + config.string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("decoder.eta") != std::string::npos);
}

TEST_CASE("cli: trace prints the final table for identity noise") {
  const auto config = write_config("trace.json", R"({
    "input": {"alpha_re": 0.6, "alpha_im": 0.0, "beta_re": 0.8, "beta_im": 0.0},
    "noise": {"kind": "rotation", "theta": 0.0},
    "run": {"trials": 1}
  })");
  const CommandResult result = run_command(
      cli_binary() + " trace " + config.string() + " --stage final");
  CHECK(result.exit_code == 0);
  // The two kept rows carry alpha/sqrt(2) and beta/sqrt(2).
  CHECK(result.output.find("(V,omega_common,out_3x) (V,omega_common,out_3y) "
                           "0.42426406871192845 0") != std::string::npos);
  CHECK(result.output.find("(H,omega_common,out_3y) (H,omega_common,out_3x) "
                           "0.5656854249492381 0") != std::string::npos);
}

TEST_CASE("cli: trace at post-pbs2 lists the 16-term state") {
  const auto config = write_config("trace16.json", R"({
    "input": {"alpha_re": 0.6, "alpha_im": 0.0, "beta_re": 0.8, "beta_im": 0.0},
    "noise": {"kind": "rotation", "theta": 0.6},
    "run": {"trials": 1}
  })");
  const CommandResult result = run_command(
      cli_binary() + " trace " + config.string() + " --stage post-pbs2");
  CHECK(result.exit_code == 0);
  int rows = 0;
  std::istringstream lines(result.output);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] == '(') ++rows;
  CHECK(rows == 16);
}

TEST_CASE("cli: unknown stage exits 2 and lists the valid stages") {
  const auto config = write_config("trace_bad.json", R"({
    "input": {"alpha_re": 1, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
    "noise": {"kind": "bitflip"},
    "run": {"trials": 1}
  })");
  const CommandResult result = run_command(
      cli_binary() + " trace " + config.string() + " --stage nowhere");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("pre-decoder") != std::string::npos);
  CHECK(result.output.find("post-pbs2") != std::string::npos);
}

TEST_CASE("cli: trace refuses haar noise and multi-trial configs") {
  const auto haar_config = write_config("trace_haar.json", R"({
    "input": {"alpha_re": 1, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
    "noise": {"kind": "haar"},
    "run": {"trials": 1}
  })");
  CHECK(run_command(cli_binary() + " trace " + haar_config.string() +
                    " --stage final")
            .exit_code == 2);
  const auto multi_config = write_config("trace_multi.json", R"({
    "input": {"alpha_re": 1, "alpha_im": 0, "beta_re": 0, "beta_im": 0},
    "noise": {"kind": "bitflip"},
    "run": {"trials": 2}
  })");
  CHECK(run_command(cli_binary() + " trace " + multi_config.string() +
                    " --stage final")
            .exit_code == 2);
}

TEST_CASE("cli: sweep emits the scaling-law CSV") {
  const auto csv_path = scratch_dir() / "sweep.csv";
  const auto config = write_config("sweep.json", R"({
    "input": {"alpha_re": 0.6, "alpha_im": 0.0, "beta_re": 0.0, "beta_im": 0.8},
    "noise": {"kind": "haar", "seed": 2},
    "decoder": {"variant": "frequency_dual_fs"},
    "run": {"trials": 5,
            "sweep": {"parameter": "eta", "values": [0.25, 0.5, 0.75, 1.0]}}
  })");
  const CommandResult result =
      run_command(cli_binary() + " sweep " + config.string() + " --output " +
                  csv_path.string());
  CHECK(result.exit_code == 0);

  std::istringstream csv(read_file(csv_path));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "parameter,success_mean,success_stderr,fidelity_mean");
  const double expected[4][2] = {
      {0.25, 0.03125}, {0.5, 0.125}, {0.75, 0.28125}, {1.0, 0.5}};
  for (const auto& [eta, success] : expected) {
    std::string line;
    REQUIRE(std::getline(csv, line));
    double got_eta, got_success, got_stderr, got_fidelity;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &got_eta,
                        &got_success, &got_stderr, &got_fidelity) == 4);
    CHECK(got_eta == eta);
    CHECK(std::abs(got_success - success) < 1e-12);
    CHECK(got_stderr < 1e-13);
    CHECK(std::abs(got_fidelity - 1.0) < 1e-10);
  }

  // Single-FS variant follows eta/2 instead.
  const auto single_config = write_config("sweep_single.json", R"({
    "input": {"alpha_re": 0.6, "alpha_im": 0.0, "beta_re": 0.0, "beta_im": 0.8},
    "noise": {"kind": "haar", "seed": 2},
    "decoder": {"variant": "frequency_single_fs"},
    "run": {"trials": 5,
            "sweep": {"parameter": "eta", "values": [0.25, 0.5, 0.75, 1.0]}}
  })");
  const auto single_csv = scratch_dir() / "sweep_single.csv";
  CHECK(run_command(cli_binary() + " sweep " + single_config.string() +
                    " --output " + single_csv.string())
            .exit_code == 0);
  std::istringstream single(read_file(single_csv));
  std::getline(single, header);
  const double expected_single[4] = {0.125, 0.25, 0.375, 0.5};
  for (double success : expected_single) {
    std::string line;
    REQUIRE(std::getline(single, line));
    double got_eta, got_success, got_stderr, got_fidelity;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &got_eta,
                        &got_success, &got_stderr, &got_fidelity) == 4);
    CHECK(std::abs(got_success - success) < 1e-12);
  }
}

TEST_CASE("cli: sweep without a sweep section exits 2") {
  const auto config = write_config("nosweep.json", minimal_config());
  CHECK(run_command(cli_binary() + " sweep " + config.string()).exit_code ==
        2);
}

TEST_CASE("cli: identical configs give byte-identical reports across --jobs") {
  const auto report_path = scratch_dir() / "det_report.json";
  const auto config = write_config("det.json", R"({
    "input": {"alpha_re": 0.6, "alpha_im": 0.0, "beta_re": 0.0, "beta_im": 0.8},
    "noise": {"kind": "haar", "seed": 11},
    "decoder": {"variant": "frequency_dual_fs", "eta": 0.65},
    "run": {"trials": 64, "oracle_check": true, "per_trial_records": true,
            "output": ")" + report_path.string() +
                                            R"("}
  })");
  CHECK(run_command(cli_binary() + " run " + config.string() + " --jobs 1")
            .exit_code == 0);
  const std::string a = read_file(report_path);
  CHECK(run_command(cli_binary() + " run " + config.string() + " --jobs 4")
            .exit_code == 0);
  const std::string b = read_file(report_path);
  CHECK(!a.empty());
  CHECK(a == b);
}

TEST_CASE("cli: validate runs the invariant suite") {
  const CommandResult result = run_command(cli_binary() + " validate");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("PASS equation_regression") != std::string::npos);
  CHECK(result.output.find("PASS success_probability_half") !=
        std::string::npos);
  CHECK(result.output.find("PASS oracle_equivalence") != std::string::npos);
  CHECK(result.output.find("FAIL") == std::string::npos);
}

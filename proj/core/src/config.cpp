#include "fqt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fqt {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError(message);
}

void reject_unknown_keys(const Json& object, const std::string& section,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&key](const char* a) {
          return key == a;
        }) == allowed.end())
      fail(section + ": unknown key \"" + key + "\"");
  }
}

double require_number(const Json& object, const std::string& section,
                      const char* key) {
  if (!object.contains(key))
    fail(section + ": missing required field \"" + key + "\"");
  const Json& value = object.at(key);
  if (!value.is_number()) fail(section + "." + key + ": expected a number");
  return value.get<double>();
}

double number_or(const Json& object, const std::string& section,
                 const char* key, double fallback) {
  if (!object.contains(key)) return fallback;
  const Json& value = object.at(key);
  if (!value.is_number()) fail(section + "." + key + ": expected a number");
  return value.get<double>();
}

bool bool_or(const Json& object, const std::string& section, const char* key,
             bool fallback) {
  if (!object.contains(key)) return fallback;
  const Json& value = object.at(key);
  if (!value.is_boolean()) fail(section + "." + key + ": expected a boolean");
  return value.get<bool>();
}

InputQubit parse_qubit(const Json& object, const std::string& section) {
  const Complex alpha{require_number(object, section, "alpha_re"),
                      require_number(object, section, "alpha_im")};
  const Complex beta{require_number(object, section, "beta_re"),
                     require_number(object, section, "beta_im")};
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > 1e-9) {
    std::ostringstream out;
    out << section << ": |alpha|^2 + |beta|^2 must be 1 (got " << norm2 << ")";
    fail(out.str());
  }
  return {alpha, beta};
}

std::vector<EnsembleMember> parse_input(const Json& object) {
  if (!object.is_object()) fail("input: expected an object");
  if (object.contains("ensemble")) {
    reject_unknown_keys(object, "input", {"ensemble"});
    const Json& members = object.at("ensemble");
    if (!members.is_array() || members.empty())
      fail("input.ensemble: expected a non-empty array");
    std::vector<EnsembleMember> ensemble;
    std::size_t index = 0;
    for (const Json& entry : members) {
      const std::string section =
          "input.ensemble[" + std::to_string(index++) + "]";
      if (!entry.is_object()) fail(section + ": expected an object");
      reject_unknown_keys(entry, section,
                          {"weight", "alpha_re", "alpha_im", "beta_re",
                           "beta_im"});
      const double weight = require_number(entry, section, "weight");
      ensemble.push_back({weight, parse_qubit(entry, section)});
    }
    return ensemble;
  }
  reject_unknown_keys(object, "input",
                      {"alpha_re", "alpha_im", "beta_re", "beta_im"});
  return {{1.0, parse_qubit(object, "input")}};
}

NoiseFamily parse_noise(const Json& object) {
  if (!object.is_object()) fail("noise: expected an object");
  if (!object.contains("kind")) fail("noise: missing required field \"kind\"");
  const Json& kind = object.at("kind");
  if (!kind.is_string()) fail("noise.kind: expected a string");
  const std::string name = kind.get<std::string>();
  if (name == "haar") {
    reject_unknown_keys(object, "noise", {"kind", "seed"});
    std::uint64_t seed = 0;
    if (object.contains("seed")) {
      const Json& value = object.at("seed");
      if (!value.is_number_integer())
        fail("noise.seed: expected an integer");
      seed = value.get<std::uint64_t>();
    }
    return NoiseFamily::haar(seed);
  }
  if (name == "dephasing") {
    reject_unknown_keys(object, "noise", {"kind", "phi"});
    return NoiseFamily::dephasing(require_number(object, "noise", "phi"));
  }
  if (name == "rotation") {
    reject_unknown_keys(object, "noise", {"kind", "theta"});
    return NoiseFamily::rotation(require_number(object, "noise", "theta"));
  }
  if (name == "bitflip") {
    reject_unknown_keys(object, "noise", {"kind"});
    return NoiseFamily::bitflip();
  }
  if (name == "fixed") {
    reject_unknown_keys(object, "noise",
                        {"kind", "delta1_re", "delta1_im", "delta2_re",
                         "delta2_im", "eta1_re", "eta1_im", "eta2_re",
                         "eta2_im"});
    NoiseUnitary u;
    u.delta1 = {require_number(object, "noise", "delta1_re"),
                require_number(object, "noise", "delta1_im")};
    u.delta2 = {require_number(object, "noise", "delta2_re"),
                require_number(object, "noise", "delta2_im")};
    u.eta1 = {require_number(object, "noise", "eta1_re"),
              require_number(object, "noise", "eta1_im")};
    u.eta2 = {require_number(object, "noise", "eta2_re"),
              require_number(object, "noise", "eta2_im")};
    try {
      return NoiseFamily::fixed(u);
    } catch (const std::invalid_argument& error) {
      fail(std::string("noise: ") + error.what());
    }
  }
  fail("noise.kind: expected one of haar, dephasing, rotation, bitflip, "
       "fixed (got \"" +
       name + "\")");
}

DecoderConfig parse_decoder(const Json& object) {
  if (!object.is_object()) fail("decoder: expected an object");
  reject_unknown_keys(object, "decoder", {"variant", "eta", "t", "with_hwp0"});
  DecoderConfig cfg;
  if (object.contains("variant")) {
    const Json& value = object.at("variant");
    if (!value.is_string()) fail("decoder.variant: expected a string");
    const std::string name = value.get<std::string>();
    if (name == "frequency_dual_fs")
      cfg.variant = DecoderVariant::FrequencyDualFs;
    else if (name == "frequency_single_fs")
      cfg.variant = DecoderVariant::FrequencySingleFs;
    else if (name == "temporal_eraser")
      cfg.variant = DecoderVariant::TemporalEraser;
    else
      fail("decoder.variant: expected one of frequency_dual_fs, "
           "frequency_single_fs, temporal_eraser (got \"" +
           name + "\")");
  }
  cfg.fs_efficiency = number_or(object, "decoder", "eta", 1.0);
  if (cfg.fs_efficiency < 0.0 || cfg.fs_efficiency > 1.0)
    fail("decoder.eta: must lie in [0, 1] (got " +
         format_double(cfg.fs_efficiency) + ")");
  cfg.eraser_transmission = number_or(object, "decoder", "t", 0.5);
  if (cfg.eraser_transmission < 0.0 || cfg.eraser_transmission > 1.0)
    fail("decoder.t: must lie in [0, 1] (got " +
         format_double(cfg.eraser_transmission) + ")");
  cfg.with_hwp0 = bool_or(object, "decoder", "with_hwp0", true);
  return cfg;
}

std::size_t branch_index_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kKeptBranches.size(); ++i)
    if (to_string(kKeptBranches[i]) == name) return i;
  fail("run.branch_filter: unknown branch \"" + name +
       "\" (expected 3x_3y, 4x_4y, 3x_4y, 4x_3y)");
}

PostSelectFilter parse_filter(const Json& run) {
  PostSelectFilter filter;
  if (run.contains("branch_filter")) {
    const Json& value = run.at("branch_filter");
    if (!value.is_array() || value.empty())
      fail("run.branch_filter: expected a non-empty array of branch names");
    filter.branches = {false, false, false, false};
    for (const Json& entry : value) {
      if (!entry.is_string())
        fail("run.branch_filter: expected branch names as strings");
      filter.branches[branch_index_from_name(entry.get<std::string>())] =
          true;
    }
  }
  if (run.contains("outcome_filter")) {
    const Json& value = run.at("outcome_filter");
    if (!value.is_array() || value.empty())
      fail("run.outcome_filter: expected a non-empty array of outcomes");
    filter.outcomes = {false, false};
    for (const Json& entry : value) {
      const std::string name =
          entry.is_string() ? entry.get<std::string>() : std::string{};
      if (name == "plus_x")
        filter.outcomes[0] = true;
      else if (name == "minus_x")
        filter.outcomes[1] = true;
      else
        fail("run.outcome_filter: expected plus_x or minus_x");
    }
  }
  return filter;
}

SweepSpec parse_sweep(const Json& object) {
  if (!object.is_object()) fail("run.sweep: expected an object");
  reject_unknown_keys(object, "run.sweep", {"parameter", "values"});
  SweepSpec sweep;
  if (!object.contains("parameter"))
    fail("run.sweep: missing required field \"parameter\"");
  const std::string name = object.at("parameter").is_string()
                               ? object.at("parameter").get<std::string>()
                               : std::string{};
  if (name == "eta")
    sweep.parameter = SweepSpec::Parameter::Eta;
  else if (name == "t")
    sweep.parameter = SweepSpec::Parameter::T;
  else
    fail("run.sweep.parameter: expected \"eta\" or \"t\"");
  if (!object.contains("values") || !object.at("values").is_array())
    fail("run.sweep.values: expected an array of numbers");
  for (const Json& value : object.at("values")) {
    if (!value.is_number()) fail("run.sweep.values: expected numbers");
    const double v = value.get<double>();
    if (v < 0.0 || v > 1.0)
      fail("run.sweep.values: value out of domain [0, 1]: " +
           format_double(v));
    sweep.values.push_back(v);
  }
  if (sweep.values.empty()) fail("run.sweep.values: must not be empty");
  return sweep;
}

}  // namespace

ExperimentSpec parse_experiment_json(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    fail(std::string("config is not valid JSON: ") + error.what());
  }
  if (!root.is_object()) fail("config: expected a JSON object");
  reject_unknown_keys(root, "config", {"input", "noise", "decoder", "run"});
  if (!root.contains("input")) fail("config: missing \"input\" section");
  if (!root.contains("noise")) fail("config: missing \"noise\" section");

  ExperimentSpec spec;
  spec.input = parse_input(root.at("input"));
  spec.noise = parse_noise(root.at("noise"));
  if (root.contains("decoder")) spec.decoder = parse_decoder(root.at("decoder"));

  if (root.contains("run")) {
    const Json& run = root.at("run");
    if (!run.is_object()) fail("run: expected an object");
    reject_unknown_keys(run, "run",
                        {"trials", "oracle_check", "per_trial_records",
                         "output", "branch_filter", "outcome_filter",
                         "sweep"});
    if (run.contains("trials")) {
      const Json& value = run.at("trials");
      if (!value.is_number_integer() || value.get<long long>() < 1)
        fail("run.trials: expected an integer >= 1");
      spec.trials = value.get<int>();
    }
    spec.oracle_check = bool_or(run, "run", "oracle_check", false);
    spec.per_trial_records = bool_or(run, "run", "per_trial_records", false);
    if (run.contains("output")) {
      const Json& value = run.at("output");
      if (!value.is_string()) fail("run.output: expected a string");
      spec.output = value.get<std::string>();
    }
    spec.filter = parse_filter(run);
    if (run.contains("sweep")) spec.sweep = parse_sweep(run.at("sweep"));
  }

  try {
    spec.validate();
  } catch (const std::invalid_argument& error) {
    fail(error.what());
  }
  return spec;
}

ExperimentSpec parse_experiment_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_json(buffer.str());
}

std::string format_double(double value) {
  std::array<char, 32> buffer;
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

namespace {

Json estimate_json(const Estimate& e) {
  return Json{{"mean", e.mean}, {"stderr", e.stderr_of_mean}};
}

Json noise_echo(const NoiseFamily& noise) {
  Json out;
  out["kind"] = to_string(noise.kind);
  switch (noise.kind) {
    case NoiseKind::Haar:
      out["seed"] = noise.seed;
      break;
    case NoiseKind::Dephasing:
      out["phi"] = noise.phi;
      break;
    case NoiseKind::Rotation:
      out["theta"] = noise.theta;
      break;
    case NoiseKind::BitFlip:
      break;
    case NoiseKind::Fixed: {
      const NoiseUnitary& u = noise.fixed_matrix;
      out["delta1_re"] = u.delta1.real();
      out["delta1_im"] = u.delta1.imag();
      out["delta2_re"] = u.delta2.real();
      out["delta2_im"] = u.delta2.imag();
      out["eta1_re"] = u.eta1.real();
      out["eta1_im"] = u.eta1.imag();
      out["eta2_re"] = u.eta2.real();
      out["eta2_im"] = u.eta2.imag();
      break;
    }
  }
  return out;
}

Json config_echo(const ExperimentSpec& spec) {
  Json config;
  if (spec.input.size() == 1) {
    const InputQubit& q = spec.input.front().input;
    config["input"] = Json{{"alpha_re", q.alpha.real()},
                           {"alpha_im", q.alpha.imag()},
                           {"beta_re", q.beta.real()},
                           {"beta_im", q.beta.imag()}};
  } else {
    Json members = Json::array();
    for (const EnsembleMember& member : spec.input)
      members.push_back(Json{{"weight", member.weight},
                             {"alpha_re", member.input.alpha.real()},
                             {"alpha_im", member.input.alpha.imag()},
                             {"beta_re", member.input.beta.real()},
                             {"beta_im", member.input.beta.imag()}});
    config["input"] = Json{{"ensemble", std::move(members)}};
  }
  config["noise"] = noise_echo(spec.noise);
  config["decoder"] = Json{{"variant", to_string(spec.decoder.variant)},
                           {"eta", spec.decoder.fs_efficiency},
                           {"t", spec.decoder.eraser_transmission},
                           {"with_hwp0", spec.decoder.with_hwp0}};
  Json run;
  run["trials"] = spec.trials;
  run["oracle_check"] = spec.oracle_check;
  run["per_trial_records"] = spec.per_trial_records;
  Json branch_filter = Json::array();
  for (std::size_t b = 0; b < kKeptBranches.size(); ++b)
    if (spec.filter.branches[b])
      branch_filter.push_back(to_string(kKeptBranches[b]));
  run["branch_filter"] = std::move(branch_filter);
  Json outcome_filter = Json::array();
  if (spec.filter.outcomes[0]) outcome_filter.push_back("plus_x");
  if (spec.filter.outcomes[1]) outcome_filter.push_back("minus_x");
  run["outcome_filter"] = std::move(outcome_filter);
  if (spec.sweep) {
    Json sweep;
    sweep["parameter"] = to_string(spec.sweep->parameter);
    sweep["values"] = spec.sweep->values;
    run["sweep"] = std::move(sweep);
  }
  run["output"] = spec.output;
  config["run"] = std::move(run);
  return config;
}

}  // namespace

std::string report_to_json(const Report& report, const ExperimentSpec& spec) {
  Json out;
  out["config"] = config_echo(spec);
  out["trials"] = report.trials;
  out["success_probability"] = estimate_json(report.success_probability);
  out["mean_fidelity_kept"] = estimate_json(report.mean_fidelity_kept);
  Json branches;
  for (std::size_t b = 0; b < kKeptBranches.size(); ++b)
    branches[to_string(kKeptBranches[b])] =
        estimate_json(report.branch_probabilities[b]);
  out["branch_probabilities"] = std::move(branches);
  out["discard_probability"] = estimate_json(report.discard_probability);
  out["discard_model_note"] = report.discard_model_note;
  out["loss_probability"] = estimate_json(report.loss_probability);
  if (report.oracle_max_deviation)
    out["oracle_max_deviation"] = *report.oracle_max_deviation;
  if (!report.per_trial.empty()) {
    Json trials = Json::array();
    for (const PerTrialRecord& record : report.per_trial) {
      Json entry;
      entry["trial"] = record.trial;
      entry["success_probability"] = record.success_probability;
      entry["mean_fidelity_kept"] = record.mean_fidelity_kept;
      Json probs;
      for (std::size_t b = 0; b < kKeptBranches.size(); ++b)
        probs[to_string(kKeptBranches[b])] = record.branch_probabilities[b];
      entry["branch_probabilities"] = std::move(probs);
      entry["discard_probability"] = record.discard_probability;
      entry["loss_probability"] = record.loss_probability;
      Json outcomes = Json::array();
      for (const TrialOutcomeRecord& outcome : record.outcomes)
        outcomes.push_back(Json{{"branch", to_string(outcome.branch)},
                                {"outcome", to_string(outcome.outcome)},
                                {"correction", to_string(outcome.correction)},
                                {"joint_probability",
                                 outcome.joint_probability},
                                {"fidelity", outcome.fidelity}});
      entry["outcomes"] = std::move(outcomes);
      trials.push_back(std::move(entry));
    }
    out["per_trial"] = std::move(trials);
  }
  return out.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<std::pair<double, Report>>& table) {
  std::ostringstream out;
  out << "parameter,success_mean,success_stderr,fidelity_mean\n";
  for (const auto& [value, report] : table)
    out << format_double(value) << ','
        << format_double(report.success_probability.mean) << ','
        << format_double(report.success_probability.stderr_of_mean) << ','
        << format_double(report.mean_fidelity_kept.mean) << '\n';
  return out.str();
}

std::string format_stage_table(const TwoPhotonState& state,
                               const std::string& stage_name) {
  std::vector<std::string> rows;
  for (const auto& [key, amp] : state.amplitudes()) {
    std::ostringstream row;
    row << to_string(key.r) << " " << to_string(key.s) << " "
        << format_double(amp.real()) << " " << format_double(amp.imag());
    rows.push_back(row.str());
  }
  std::sort(rows.begin(), rows.end());
  std::ostringstream out;
  out << "# stage: " << stage_name << "\n";
  out << "# r_basis s_basis re im\n";
  for (const std::string& row : rows) out << row << "\n";
  return out.str();
}

}  // namespace fqt

// Copyright 2026 The chancompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// chancompat: decide channel compatibility, steerability and Bell locality
// from JSON files or named presets, and scan the CHSH θ-family.
//
// Exit codes: 0 decided, 2 marginal, 1 input error, 3 numerical failure.

#include <CLI11.hpp>

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "chancompat.hpp"

namespace cc = chancompat;

namespace {

constexpr int kExitDecided = 0;
constexpr int kExitInput = 1;
constexpr int kExitMarginal = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
  std::vector<std::string> inputs;
  std::string preset;
  std::string out;
  double eps = cc::Tolerances{}.feasibility_eps;
  double gap = cc::Tolerances{}.solver_gap;
  bool json = false;
  double theta_min = 1.0;
  double theta_max = 10.0;
  std::size_t steps = 901;

  cc::Tolerances tolerances() const {
    cc::Tolerances t;
    t.feasibility_eps = eps;
    t.solver_gap = gap;
    return t;
  }
};

cc::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cc::ValidationError("cannot open " + path);
  try {
    return cc::Json::parse(in);
  } catch (const cc::Json::exception& e) {
    throw cc::ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

cc::Channel load_channel(const std::string& path) {
  try {
    return cc::channel_from_json(read_json(path));
  } catch (const std::invalid_argument& e) {
    throw cc::ValidationError(path + ": " + e.what());
  } catch (const cc::Json::exception& e) {
    throw cc::ValidationError(path + ": " + e.what());
  }
}

cc::DensityMatrix load_state(const std::string& path) {
  try {
    return cc::state_from_json(read_json(path)).rho;
  } catch (const std::invalid_argument& e) {
    throw cc::ValidationError(path + ": " + e.what());
  } catch (const cc::Json::exception& e) {
    throw cc::ValidationError(path + ": " + e.what());
  }
}

void check_inputs(const RunConfig& cfg, std::size_t files, const char* what) {
  if (!cfg.preset.empty() && !cfg.inputs.empty())
    throw cc::ValidationError("give either --preset or input files, not both");
  if (cfg.preset.empty() && cfg.inputs.size() != files)
    throw cc::ValidationError(std::string("expected ") + what);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw cc::ValidationError("cannot write " + cfg.out);
  f << text;
  if (!f) throw cc::ValidationError("cannot write " + cfg.out);
}

int exit_for(cc::Feasibility f) { return f == cc::Feasibility::Marginal ? kExitMarginal : kExitDecided; }

std::string human(const std::string& cmd, const std::string& verdict, double slack) {
  return cmd + ": " + verdict + " (slack " + cc::format_double(slack) + ")\n";
}

int run_compat(const RunConfig& cfg) {
  check_inputs(cfg, 2, "two channel files");
  cc::CompatInstance inst = cfg.preset.empty()
                                ? cc::CompatInstance{load_channel(cfg.inputs[0]), load_channel(cfg.inputs[1])}
                                : cc::compat_preset(cfg.preset);
  const cc::CompatReport rep = cc::channels_compatible(inst.c1, inst.c2, cfg.tolerances());
  const char* verdict = cc::to_string(rep.verdict);
  if (cfg.json) {
    cc::Json j;
    j["verdict"] = verdict;
    j["slack"] = cc::real_to_json(rep.feasibility.slack);
    j["witness"] = rep.joint ? cc::channel_to_json(*rep.joint) : cc::Json(nullptr);
    j["dual_value"] = rep.dual_witness ? cc::real_to_json(rep.dual_witness->value) : cc::Json(nullptr);
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, human("compat", verdict, rep.feasibility.slack));
  }
  return rep.verdict == cc::CompatVerdict::Marginal ? kExitMarginal : kExitDecided;
}

const char* steer_verdict(cc::Feasibility f) {
  switch (f) {
    case cc::Feasibility::Feasible: return "unsteerable";
    case cc::Feasibility::Infeasible: return "steerable";
    case cc::Feasibility::Marginal: return "marginal";
  }
  return "marginal";
}

const char* bell_verdict(cc::Feasibility f) {
  switch (f) {
    case cc::Feasibility::Feasible: return "local";
    case cc::Feasibility::Infeasible: return "nonlocal";
    case cc::Feasibility::Marginal: return "marginal";
  }
  return "marginal";
}

cc::HermitianMatrix unit_trace(const cc::HermitianMatrix& m) {
  return cc::HermitianMatrix::symmetrized(m.matrix() / m.matrix().trace().real());
}

int run_steer(const RunConfig& cfg) {
  check_inputs(cfg, 3, "a state file and two channel files");
  cc::SteerInstance inst =
      cfg.preset.empty()
          ? cc::SteerInstance{load_state(cfg.inputs[0]), load_channel(cfg.inputs[1]), load_channel(cfg.inputs[2])}
          : cc::steer_preset(cfg.preset);
  const cc::MarginalSpec spec = cc::steering_spec(inst.rho, inst.c1, inst.c2);
  const cc::FeasibilityReport rep = cc::marginal_feasibility(spec, cfg.tolerances());
  const char* verdict = steer_verdict(rep.status);
  if (cfg.json) {
    cc::Json j;
    j["verdict"] = verdict;
    j["slack"] = cc::real_to_json(rep.slack);
    j["witness"] = rep.status == cc::Feasibility::Feasible ? cc::state_to_json(unit_trace(*rep.witness), spec.shape)
                                                            : cc::Json(nullptr);
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, human("steer", verdict, rep.slack));
  }
  return exit_for(rep.status);
}

int run_bell(const RunConfig& cfg) {
  check_inputs(cfg, 5, "a state file and four channel files");
  cc::BellInstance inst = cfg.preset.empty()
                              ? cc::BellInstance{load_state(cfg.inputs[0]), load_channel(cfg.inputs[1]),
                                                 load_channel(cfg.inputs[2]), load_channel(cfg.inputs[3]),
                                                 load_channel(cfg.inputs[4])}
                              : cc::bell_preset(cfg.preset);
  const cc::MarginalSpec spec = cc::bell_spec(inst.rho, inst.c11, inst.c21, inst.c12, inst.c22);
  const cc::FeasibilityReport rep = cc::marginal_feasibility(spec, cfg.tolerances());
  const char* verdict = bell_verdict(rep.status);
  const bool qubits = inst.c11.out_dim() == 2 && inst.c21.out_dim() == 2 && inst.c12.out_dim() == 2 &&
                      inst.c22.out_dim() == 2;
  double x = 0.0;
  if (qubits) x = cc::chsh_value(inst.c11, inst.c21, inst.c12, inst.c22, inst.rho).x;
  if (cfg.json) {
    cc::Json j;
    j["verdict"] = verdict;
    j["slack"] = cc::real_to_json(rep.slack);
    j["witness"] = rep.status == cc::Feasibility::Feasible ? cc::state_to_json(unit_trace(*rep.witness), spec.shape)
                                                            : cc::Json(nullptr);
    if (qubits) j["chsh"] = cc::real_to_json(x);
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string text = human("bell", verdict, rep.slack);
    if (qubits) text.insert(text.size() - 2, ", chsh " + cc::format_double(x));
    emit(cfg, text);
  }
  return exit_for(rep.status);
}

int run_scan(const RunConfig& cfg) {
  const auto rows = cc::chsh_scan(cfg.theta_min, cfg.theta_max, cfg.steps);
  std::ostringstream csv;
  cc::write_scan_csv(csv, rows);
  std::size_t best = 0;
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (rows[k].x > rows[best].x) best = k;
  const std::string summary = "max X = " + cc::format_double(rows[best].x) +
                              " at theta = " + cc::format_double(rows[best].theta) + "\n";
  if (cfg.out.empty()) {
    std::cout << csv.str();
    std::cerr << summary;
  } else {
    emit(cfg, csv.str());
    std::cout << summary;
  }
  return kExitDecided;
}

int run_preset_list(const RunConfig& cfg) {
  std::ostringstream s;
  if (cfg.json) {
    cc::Json j = cc::Json::array();
    for (const auto& p : cc::preset_list())
      j.push_back({{"name", p.name}, {"commands", p.commands}, {"description", p.description}});
    s << j.dump(2) << "\n";
  } else {
    for (const auto& p : cc::preset_list()) s << p.name << "\t[" << p.commands << "]\t" << p.description << "\n";
  }
  emit(cfg, s.str());
  return kExitDecided;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool inputs) {
  sub->add_option("--eps", cfg.eps, "half-width of the marginal band around slack 0")
      ->check(CLI::PositiveNumber);
  sub->add_option("--gap", cfg.gap, "relative duality gap target of the solver")->check(CLI::PositiveNumber);
  sub->add_option("--out", cfg.out, "write the result to this path instead of stdout");
  sub->add_flag("--json", cfg.json, "machine-readable JSON output");
  if (inputs) {
    sub->add_option("--preset", cfg.preset, "named instance (see `preset list`)");
    sub->add_option("files", cfg.inputs, "input JSON files");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel compatibility, steering and Bell locality via semidefinite programming"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* compat = app.add_subcommand("compat", "are two channels compatible? files: channel1 channel2");
  add_common(compat, cfg, true);
  auto* steer = app.add_subcommand("steer", "can a state be steered by two channels? files: state channel1 channel2");
  add_common(steer, cfg, true);
  auto* bell = app.add_subcommand("bell", "is a state Bell local for four channels? files: state c11 c21 c12 c22");
  add_common(bell, cfg, true);
  auto* scan = app.add_subcommand("chsh-scan", "CSV of the CHSH value along the theta family");
  add_common(scan, cfg, false);
  scan->add_option("--theta-min", cfg.theta_min, "lower end of the theta range");
  scan->add_option("--theta-max", cfg.theta_max, "upper end of the theta range");
  scan->add_option("--steps", cfg.steps, "number of grid points")->check(CLI::PositiveNumber);
  auto* preset = app.add_subcommand("preset", "named instances");
  preset->require_subcommand(1);
  auto* list = preset->add_subcommand("list", "list preset names");
  list->add_flag("--json", cfg.json, "machine-readable JSON output");
  list->add_option("--out", cfg.out, "write the list to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (compat->parsed()) return run_compat(cfg);
    if (steer->parsed()) return run_steer(cfg);
    if (bell->parsed()) return run_bell(cfg);
    if (scan->parsed()) return run_scan(cfg);
    if (list->parsed()) return run_preset_list(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const cc::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

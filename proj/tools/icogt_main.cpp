// Command-line front end: protocol verification, fidelity sweeps, photonic
// cross-checks, and gadget decomposition checks, with CSV/JSON emission.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "icogt/fidelity.hpp"
#include "icogt/gates.hpp"
#include "icogt/photonic.hpp"
#include "icogt/protocol.hpp"
#include "icogt/qmath.hpp"
#include "icogt/report.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace icogt;

constexpr std::uint64_t kDefaultSeed = 202406;
constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitIoError = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ICOGT_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return kDefaultSeed;
}

struct ParamSpec {
  std::string preset_name;
  std::optional<double> alpha;
  std::optional<double> theta;
  std::vector<double> n;
  std::vector<double> n_perp;

  bool has_explicit() const { return alpha || theta || !n.empty() || !n_perp.empty(); }

  CUParams resolve() const {
    if (!preset_name.empty()) {
      if (has_explicit()) {
        throw std::invalid_argument("--preset conflicts with explicit gate parameters");
      }
      const auto p = preset_from_string(preset_name);
      if (!p) throw std::invalid_argument("unknown preset '" + preset_name + "'");
      return preset(*p).params;
    }
    if (!alpha || !theta || n.size() != 3) {
      throw std::invalid_argument("need --preset, or --alpha, --theta and --n x,y,z");
    }
    const UnitVec3 axis(n[0], n[1], n[2]);  // unit norm enforced, no normalization
    if (!n_perp.empty()) {
      if (n_perp.size() != 3) throw std::invalid_argument("--n-perp needs three components");
      return CUParams(*alpha, *theta, axis, UnitVec3(n_perp[0], n_perp[1], n_perp[2]));
    }
    return CUParams(*alpha, *theta, axis);
  }

  json describe() const {
    json j;
    if (!preset_name.empty()) {
      j["preset"] = preset_name;
    } else {
      j["alpha"] = alpha.value_or(0.0);
      j["theta"] = theta.value_or(0.0);
      j["n"] = n;
      if (!n_perp.empty()) j["n_perp"] = n_perp;
    }
    return j;
  }
};

void add_param_flags(CLI::App* cmd, ParamSpec& spec) {
  cmd->add_option("--preset", spec.preset_name, "named gate: cnot, cz, cy, ch");
  cmd->add_option("--alpha", spec.alpha, "target-gate phase angle (radians)");
  cmd->add_option("--theta", spec.theta, "target-gate rotation angle (radians)");
  cmd->add_option("--n", spec.n, "rotation axis, comma-separated unit vector")
      ->delimiter(',')
      ->expected(3);
  cmd->add_option("--n-perp", spec.n_perp, "orthogonal axis override, comma-separated")
      ->delimiter(',')
      ->expected(3);
}

json report_to_json(const Report& rep, const std::string& command, const json& config) {
  json checks = json::array();
  for (const CheckResult& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"max_deviation", c.max_deviation},
                      {"tolerance", c.tolerance}});
  }
  return json{{"schema", 1},
              {"command", command},
              {"config", config},
              {"passed", rep.all_passed()},
              {"max_deviation", rep.max_deviation()},
              {"checks", checks}};
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return kExitPass;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kExitIoError;
  }
  out << text;
  if (!out.good()) {
    std::cerr << "error: write to '" << path << "' failed\n";
    return kExitIoError;
  }
  return kExitPass;
}

int finish_report(const Report& rep, const std::string& command, const json& config,
                  const std::string& output_path) {
  const int io = emit(report_to_json(rep, command, config).dump(2) + "\n", output_path);
  if (io != kExitPass) return io;
  return rep.all_passed() ? kExitPass : kExitCheckFailure;
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_verify(const ParamSpec& spec, int trials, std::uint64_t seed, double tol,
               const std::string& output_path) {
  const CUParams params = spec.resolve();
  Report rep = verify_equivalence(params, trials, seed, tol);
  rep.merge(verify_appendix(params));
  json config = spec.describe();
  config["trials"] = trials;
  config["seed"] = seed;
  config["tol"] = tol;
  return finish_report(rep, "verify", config, output_path);
}

int cmd_sweep(const std::string& presets_arg, double delta_min, double delta_max,
              int steps, int grid_n, const std::string& policy_arg,
              const std::string& format, const std::string& output_path) {
  std::vector<PresetName> presets;
  {
    std::stringstream ss(presets_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto p = preset_from_string(tok);
      if (!p) throw std::invalid_argument("unknown preset '" + tok + "'");
      presets.push_back(*p);
    }
  }
  if (presets.empty()) throw std::invalid_argument("no presets given");

  BranchPolicy policy = BranchPolicy::kClassMu;
  if (policy_arg == "nu") {
    policy = BranchPolicy::kClassNu;
  } else if (policy_arg == "weighted") {
    policy = BranchPolicy::kProbabilityWeighted;
  } else if (policy_arg != "mu") {
    throw std::invalid_argument("--policy must be mu, nu or weighted");
  }

  const FidelityCurve curve =
      sweep(presets, delta_min, delta_max, steps, policy, IntegratorConfig{grid_n});

  if (format == "csv") {
    std::string text = "delta";
    for (const PresetName p : curve.presets) text += ",F_" + preset_to_string(p);
    text += "\n";
    for (std::size_t i = 0; i < curve.deltas.size(); ++i) {
      text += format_g12(curve.deltas[i]);
      for (std::size_t g = 0; g < curve.presets.size(); ++g) {
        text += "," + format_g12(curve.fidelities[g][i]);
      }
      text += "\n";
    }
    return emit(text, output_path);
  }
  if (format != "json") throw std::invalid_argument("--format must be csv or json");
  json series = json::object();
  for (std::size_t g = 0; g < curve.presets.size(); ++g) {
    series["F_" + preset_to_string(curve.presets[g])] = curve.fidelities[g];
  }
  const json j{{"schema", 1}, {"command", "sweep"}, {"deltas", curve.deltas},
               {"series", series}};
  return emit(j.dump(2) + "\n", output_path);
}

int cmd_photonic(const ParamSpec& spec, int trials, std::uint64_t seed, double tol,
                 const std::string& output_path) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);

  Report rep;
  const auto run_for = [&](const CUParams& params, const std::string& tag) {
    double worst_prob = 0.0, worst_residual = 0.0, worst_ff = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Report one = photonic_vs_abstract(params, u(rng), u(rng), tol);
      for (const CheckResult& c : one.checks) {
        if (c.name.find("prob") != std::string::npos) {
          worst_prob = std::max(worst_prob, c.max_deviation);
        } else if (c.name.find("residual") != std::string::npos) {
          worst_residual = std::max(worst_residual, c.max_deviation);
        } else {
          worst_ff = std::max(worst_ff, c.max_deviation);
        }
      }
    }
    rep.add("photonic/" + tag + "/coincidence_prob_vs_quarter", worst_prob, 1e-12);
    rep.add("photonic/" + tag + "/residual_vs_branch", worst_residual, tol);
    rep.add("photonic/" + tag + "/feedforward_vs_cu", worst_ff, tol);
  };

  json config;
  if (spec.preset_name.empty() && !spec.has_explicit()) {
    for (const PresetName p : {PresetName::kCnot, PresetName::kCz, PresetName::kCy,
                               PresetName::kCh}) {
      run_for(preset(p).params, preset_to_string(p));
    }
    config["presets"] = "all";
  } else {
    run_for(spec.resolve(), "params");
    config = spec.describe();
  }
  config["trials"] = trials;
  config["seed"] = seed;
  config["tol"] = tol;
  return finish_report(rep, "photonic", config, output_path);
}

int cmd_decompose(int trials, std::uint64_t seed, double tol,
                  const std::string& output_path) {
  Report rep;
  constexpr double kPi = std::numbers::pi;

  // Short-form gadget for the z quarter rotation.
  const Operator u_a1_gadget = qwp(kPi / 4) * hwp(3 * kPi / 8) * qwp(kPi / 4);
  const PhaseMatch m1 = equal_up_to_global_phase(rotation_z(kPi / 2), u_a1_gadget, tol);
  rep.add("decompose/ua1_qwp_hwp_qwp", m1.deviation, tol);

  // Nine-element gadget for the bit flip.
  const GadgetAngles x_angles{3 * kPi / 4, 7 * kPi / 8, 3 * kPi / 4, 3 * kPi / 8, kPi / 4};
  const PhaseMatch m2 = equal_up_to_global_phase(pauli_x(), reciprocal_gadget(x_angles), tol);
  rep.add("decompose/ua2_nine_element", m2.deviation, tol);

  // Reciprocity across randomly constructed direction-insensitive gadgets.
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<OpticalElement> seq = gadget_sequence(random_reciprocal_gadget(rng));
    const PhaseMatch pm =
        equal_up_to_global_phase(forward_operator(seq), backward_operator(seq), tol);
    worst = std::max(worst, std::isfinite(pm.deviation) ? pm.deviation : 1.0);
  }
  rep.add("decompose/reciprocity_random_gadgets", worst, tol);

  const json config{{"trials", trials}, {"seed", seed}, {"tol", tol}};
  return finish_report(rep, "decompose", config, output_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verifier for nonlocal controlled-unitary gate "
               "teleportation through superposed gate orders, including the "
               "Sagnac-interferometer optical model and its imperfection analysis."};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  std::string output_path;

  // verify
  auto* verify = app.add_subcommand("verify", "protocol equivalence and operator-identity checks");
  ParamSpec verify_spec;
  add_param_flags(verify, verify_spec);
  int verify_trials = 100;
  double verify_tol = kDefaultTol;
  verify->add_option("--trials", verify_trials, "random input pairs per branch");
  verify->add_option("--seed", seed, "random generator seed");
  verify->add_option("--tol", verify_tol, "equivalence tolerance");
  verify->add_option("--output,-o", output_path, "write the JSON report to a file");

  // sweep
  auto* sw = app.add_subcommand("sweep", "average gate fidelity over an imperfection range");
  std::string sweep_presets = "cnot,cy,cz,ch";
  double delta_min = -0.5, delta_max = 0.5;
  int sweep_steps = 101, grid_n = 64;
  std::string policy = "mu", sweep_format = "csv";
  sw->add_option("--presets", sweep_presets, "comma-separated preset list");
  sw->add_option("--delta-min", delta_min, "sweep start");
  sw->add_option("--delta-max", delta_max, "sweep end");
  sw->add_option("--steps", sweep_steps, "number of grid points (inclusive ends)");
  sw->add_option("--grid", grid_n, "quadrature points per input angle");
  sw->add_option("--policy", policy, "branch policy: mu, nu or weighted");
  sw->add_option("--format", sweep_format, "csv or json");
  sw->add_option("--output,-o", output_path, "write the table to a file");

  // photonic
  auto* ph = app.add_subcommand("photonic", "optical pipeline against the abstract protocol");
  ParamSpec ph_spec;
  add_param_flags(ph, ph_spec);
  int ph_trials = 50;
  double ph_tol = kDefaultTol;
  ph->add_option("--trials", ph_trials, "random preparation-angle pairs");
  ph->add_option("--seed", seed, "random generator seed");
  ph->add_option("--tol", ph_tol, "state comparison tolerance");
  ph->add_option("--output,-o", output_path, "write the JSON report to a file");

  // decompose
  auto* de = app.add_subcommand("decompose", "waveplate gadget identities and reciprocity");
  int de_trials = 100;
  double de_tol = 1e-10;
  de->add_option("--trials", de_trials, "random reciprocal gadgets to check");
  de->add_option("--seed", seed, "random generator seed");
  de->add_option("--tol", de_tol, "identity tolerance");
  de->add_option("--output,-o", output_path, "write the JSON report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    if (verify->parsed()) {
      return cmd_verify(verify_spec, verify_trials, seed, verify_tol, output_path);
    }
    if (sw->parsed()) {
      return cmd_sweep(sweep_presets, delta_min, delta_max, sweep_steps, grid_n, policy,
                       sweep_format, output_path);
    }
    if (ph->parsed()) {
      return cmd_photonic(ph_spec, ph_trials, seed, ph_tol, output_path);
    }
    if (de->parsed()) {
      return cmd_decompose(de_trials, seed, de_tol, output_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitInvalidInput;
}

#include "icogt/fidelity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "icogt/protocol.hpp"

namespace icogt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<int> forced_for(BranchClass branch) {
  // Representative joint outcome (a = +); the other outcome of the same class
  // projects onto the identical residual.
  return branch == BranchClass::kClassMu ? std::vector<int>{0, 0}
                                         : std::vector<int>{0, 1};
}

ProtocolTranscript forced_run(const CUParams& params, const ProtocolGateSet& gates,
                              BranchClass branch, double theta1, double theta2) {
  const InputQubit in_a(std::cos(theta1), std::sin(theta1));
  const InputQubit in_b(std::cos(theta2), std::sin(theta2));
  OutcomeSource src = OutcomeSource::forced(forced_for(branch));
  return run_protocol_with_gates(params, gates, in_a, in_b, src);
}

double overlap_fidelity(const CUParams& params, const ProtocolGateSet& ideal,
                        const ProtocolGateSet& imperfect, BranchClass branch,
                        double theta1, double theta2) {
  const ProtocolTranscript a = forced_run(params, ideal, branch, theta1, theta2);
  const ProtocolTranscript b = forced_run(params, imperfect, branch, theta1, theta2);
  const Cplx ov = a.final_state.inner(b.final_state);
  return std::norm(ov);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

double branch_fidelity(const CUParams& params, double delta, BranchClass branch,
                       double theta1, double theta2) {
  return overlap_fidelity(params, protocol_gates(params), imperfect_gates(params, delta),
                          branch, theta1, theta2);
}

double average_fidelity(const FidelityQuery& query) {
  const int n = query.integrator.grid_n;
  if (n < 8) throw std::invalid_argument("average_fidelity: integrator grid must be >= 8x8");

  const ProtocolGateSet ideal = protocol_gates(query.params);
  const ProtocolGateSet imperfect = imperfect_gates(query.params, query.delta);

  const auto point = [&](BranchClass branch, double t1, double t2) {
    return overlap_fidelity(query.params, ideal, imperfect, branch, t1, t2);
  };

  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double t1 = kTwoPi * i / n;
    for (int j = 0; j < n; ++j) {
      const double t2 = kTwoPi * j / n;
      switch (query.policy) {
        case BranchPolicy::kClassMu:
          samples.push_back(point(BranchClass::kClassMu, t1, t2));
          break;
        case BranchPolicy::kClassNu:
          samples.push_back(point(BranchClass::kClassNu, t1, t2));
          break;
        case BranchPolicy::kProbabilityWeighted: {
          // Weights are the practical joint-outcome probabilities; within a
          // class both joint outcomes share the state and the probability.
          const ProtocolTranscript mu =
              forced_run(query.params, imperfect, BranchClass::kClassMu, t1, t2);
          const ProtocolTranscript nu =
              forced_run(query.params, imperfect, BranchClass::kClassNu, t1, t2);
          const double w_mu = 2.0 * mu.branch_probability;
          const double w_nu = 2.0 * nu.branch_probability;
          const ProtocolTranscript mu_ideal =
              forced_run(query.params, ideal, BranchClass::kClassMu, t1, t2);
          const ProtocolTranscript nu_ideal =
              forced_run(query.params, ideal, BranchClass::kClassNu, t1, t2);
          const double f_mu = std::norm(mu_ideal.final_state.inner(mu.final_state));
          const double f_nu = std::norm(nu_ideal.final_state.inner(nu.final_state));
          samples.push_back((w_mu * f_mu + w_nu * f_nu) / (w_mu + w_nu));
          break;
        }
      }
    }
  }
  return pairwise_sum(samples) / static_cast<double>(samples.size());
}

FidelityCurve sweep(std::span<const PresetName> presets, double delta_min,
                    double delta_max, int steps, BranchPolicy policy,
                    IntegratorConfig integrator) {
  if (steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
  FidelityCurve curve;
  curve.deltas.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    curve.deltas.push_back(delta_min + (delta_max - delta_min) * i / (steps - 1));
  }
  for (const PresetName name : presets) {
    const GatePreset gp = preset(name);
    std::vector<double> row;
    row.reserve(curve.deltas.size());
    for (const double d : curve.deltas) {
      row.push_back(average_fidelity(FidelityQuery{gp.params, d, policy, integrator}));
    }
    curve.presets.push_back(name);
    curve.fidelities.push_back(std::move(row));
  }
  return curve;
}

}  // namespace icogt

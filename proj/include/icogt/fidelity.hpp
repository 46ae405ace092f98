#pragma once

#include <span>
#include <string>
#include <vector>

#include "icogt/gates.hpp"

namespace icogt {

enum class BranchPolicy { kClassMu, kClassNu, kProbabilityWeighted };

/// Uniform periodic grid over [0, 2π)² (trapezoid rule on the torus).
struct IntegratorConfig {
  int grid_n = 64;  // points per axis, minimum 8
};

struct FidelityQuery {
  CUParams params;
  double delta = 0.0;
  BranchPolicy policy = BranchPolicy::kClassMu;
  IntegratorConfig integrator;
};

/// Squared overlap between the ideal and the δ-imperfect protocol output for
/// one forced branch, inputs cos θᵢ|0⟩ + sin θᵢ|1⟩. The imperfect run uses the
/// imperfect switch gates with the ideal feed-forward; its post-measurement
/// state is renormalized before the overlap.
double branch_fidelity(const CUParams& params, double delta, BranchClass branch,
                       double theta1, double theta2);

/// Average of branch_fidelity over the (θ₁, θ₂) grid, per the query's policy.
double average_fidelity(const FidelityQuery& query);

/// δ-sweep data for a set of presets.
struct FidelityCurve {
  std::vector<double> deltas;
  std::vector<PresetName> presets;
  std::vector<std::vector<double>> fidelities;  // [preset][delta index]
};

FidelityCurve sweep(std::span<const PresetName> presets, double delta_min,
                    double delta_max, int steps,
                    BranchPolicy policy = BranchPolicy::kClassMu,
                    IntegratorConfig integrator = {});

/// Deterministic, order-independent reduction used by the quadrature.
double pairwise_sum(std::span<const double> values);

}  // namespace icogt

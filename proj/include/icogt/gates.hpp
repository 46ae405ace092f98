#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "icogt/qmath.hpp"

namespace icogt {

/// Target-gate parameters: U = exp[i(α·I + θ·n·σ)] on the controlled qubit,
/// plus an orthogonal axis n⊥ used by the single-qubit gate set.
struct CUParams {
  double alpha;
  double theta;
  UnitVec3 n;
  UnitVec3 n_perp;

  /// Derives n⊥ with the default rule (normalize(ẑ × n), else (1,0,0)).
  CUParams(double alpha_, double theta_, const UnitVec3& n_);

  /// Explicit n⊥; throws std::invalid_argument unless n·n⊥ = 0 within 1e-9.
  CUParams(double alpha_, double theta_, const UnitVec3& n_, const UnitVec3& n_perp_);
};

/// Deterministic orthogonal-axis rule: normalize(ẑ × n) when ‖ẑ × n‖ > 1e-8,
/// otherwise (1, 0, 0).
UnitVec3 orthogonal_axis(const UnitVec3& n);

/// e^{iα}(cos θ·I + i sin θ·n·σ), the controlled single-qubit target.
Operator u_target(const CUParams& p);

/// |0⟩⟨0|⊗I + |1⟩⟨1|⊗U, control in the first register slot.
Operator cu_gate(const CUParams& p);

/// The protocol's single-qubit gates. The switch gates U_* may be non-unitary
/// when produced by imperfect_gates; V_A and V_B are always the ideal matrices.
struct ProtocolGateSet {
  Operator u_a1;
  Operator u_a2;
  Operator u_b1;
  Operator u_b2;
  Operator v_a;
  Operator v_b;
};

/// Ideal gate set: U_A1 = R_z(π/2), U_A2 = X, U_B1 = R_n(π/2), U_B2 = n⊥·σ,
/// V_A = X, V_B = n⊥·σ.
ProtocolGateSet protocol_gates(const CUParams& p);

/// δ-imperfect variants: the n_x (resp. n_x′) component of each switch gate's
/// axis is scaled by (1+δ). δ = 0 reproduces protocol_gates bit-identically.
ProtocolGateSet imperfect_gates(const CUParams& p, double delta);

enum class BranchClass { kClassMu, kClassNu };

struct FeedforwardOps {
  Operator w_a;
  Operator w_b;
  Cplx phase;  // e^{iα/2} for class μ, i·e^{iα/2} for class ν
};

/// Corrective gates and the residual global phase for a branch class.
FeedforwardOps feedforward(BranchClass branch, const CUParams& p);

enum class PresetName { kCnot, kCz, kCy, kCh };

struct GatePreset {
  PresetName name;
  CUParams params;
};

/// The four named presets, with the explicitly paired n⊥ of each.
GatePreset preset(PresetName name);

std::optional<PresetName> preset_from_string(std::string_view s);
std::string preset_to_string(PresetName name);

}  // namespace icogt

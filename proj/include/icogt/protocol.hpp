#pragma once

#include <cstdint>
#include <utility>

#include "icogt/gates.hpp"
#include "icogt/qmath.hpp"
#include "icogt/report.hpp"

namespace icogt {

/// Single-qubit protocol input; amplitudes must be normalized within 1e-12.
struct InputQubit {
  Cplx amp0;
  Cplx amp1;

  InputQubit(Cplx a0, Cplx a1);
  StateVec state() const { return StateVec::from_single_qubit(amp0, amp1); }
};

enum class AOutcome { kPlus, kMinus };
enum class BOutcome { kMu, kNu };

/// Joint ancilla measurement result. Class μ corresponds to (+, μ) or (−, ν);
/// class ν to (+, ν) or (−, μ).
struct BranchOutcome {
  AOutcome a_outcome;
  BOutcome b_outcome;
  double b_basis_angle;  // θ when a = +, π − θ when a = −
  BranchClass branch_class;
};

BranchClass classify_branch(AOutcome a, BOutcome b);

/// Communication/entanglement cost of one run: 1 ebit, 2 cbits, 2 switches.
struct ResourceLedger {
  int ebits = 0;
  int cbits = 0;
  int switches = 0;
};

struct ProtocolTranscript {
  BranchOutcome outcome;
  double branch_probability;  // joint outcome probability (1/4 for ideal gates)
  FeedforwardOps feedforward_applied;
  Cplx global_phase;  // phase φ with CU·|input⟩ = φ·final_state
  StateVec final_state;
  ResourceLedger ledger;
};

/// |Φ⟩₀ = (|00⟩_ab + i|11⟩_ab)/√2 ⊗ |φ⟩_A ⊗ |φ⟩_B on register (a, b, A, B).
StateVec prepare_initial(const InputQubit& in_a, const InputQubit& in_b);

/// V_A on qubit A, V_B on qubit B.
StateVec apply_local_v(const StateVec& state, const ProtocolGateSet& gates);

/// Both quantum switches: |00⟩⟨00|_ab ⊗ U_A2U_A1⊗U_B2U_B1 +
/// |11⟩⟨11|_ab ⊗ U_A1U_A2⊗U_B1U_B2, identity on the remaining ab components.
StateVec apply_switches(const StateVec& state, const ProtocolGateSet& gates);

/// S_μ(θ) = cos(θ/2)·M₀ + i·sin(θ/2)·M₁ or S_ν(θ) = sin(θ/2)·M₀ − i·cos(θ/2)·M₁
/// with M₀ = U_A2U_A1⊗U_B2U_B1, M₁ = U_A1U_A2⊗U_B1U_B2.
Operator switch_superposition(BranchClass branch, double theta,
                              const ProtocolGateSet& gates);

/// Measures a in {|±⟩}, adaptively selects the b basis angle (θ for +, π−θ
/// for −), measures b in {μ, ν}, and returns the renormalized residual on
/// (A, B) together with the classified outcome and its joint probability.
struct AncillaMeasurement {
  BranchOutcome outcome;
  double probability;
  StateVec post_state;  // 2 qubits (A, B)
};
AncillaMeasurement measure_ancillas(const StateVec& state, double theta,
                                    OutcomeSource& source);

/// Full run with the ideal gate set.
ProtocolTranscript run_protocol(const CUParams& params, const InputQubit& in_a,
                                const InputQubit& in_b, OutcomeSource& source);

/// Full run with an explicit (possibly non-unitary) switch gate set; the
/// feed-forward gates stay the ideal ones. Used by the imperfection model.
ProtocolTranscript run_protocol_with_gates(const CUParams& params,
                                           const ProtocolGateSet& gates,
                                           const InputQubit& in_a,
                                           const InputQubit& in_b,
                                           OutcomeSource& source);

/// R_zn(θ) = cos(θ/2)·I⊗I − i·sin(θ/2)·Z⊗(n·σ).
Operator rzn(double theta, const UnitVec3& n);

/// Runs `trials` random input pairs through all four forced branches and
/// checks the final state against CU·input (state match up to global phase,
/// phase against the branch table).
Report verify_equivalence(const CUParams& params, int trials, std::uint64_t seed,
                          double tol = kDefaultTol);

/// Operator-identity checks: the four gate identities, both R_zn
/// reconstructions, and both CU reconstructions with their branch phases.
Report verify_appendix(const CUParams& params, double tol_identity = 1e-12,
                       double tol_reconstruction = 1e-10);

}  // namespace icogt

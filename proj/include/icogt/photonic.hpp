#pragma once

#include <random>
#include <span>
#include <vector>

#include "icogt/gates.hpp"
#include "icogt/qmath.hpp"
#include "icogt/report.hpp"

namespace icogt {

/// Waveplate orientation angles of the reciprocal polarization gadget:
/// QWP(θ₁)·HWP(φ₁)·R_y(−π/2)·QWP(π/2)·HWP(γ)·QWP(π/2)·R_y(π/2)·HWP(φ₂)·QWP(θ₂).
struct GadgetAngles {
  double theta1;
  double phi1;
  double gamma;
  double phi2;
  double theta2;
};

enum class ElementKind { kHwp, kQwp, kFaraday };

/// One optical element of a beam line. Waveplates are reciprocal; Faraday
/// rotators are not.
struct OpticalElement {
  ElementKind kind;
  double angle;  // orientation for waveplates, circular retardance for Faraday

  static OpticalElement hwp(double theta) { return {ElementKind::kHwp, theta}; }
  static OpticalElement qwp(double theta) { return {ElementKind::kQwp, theta}; }
  static OpticalElement faraday(double chi) { return {ElementKind::kFaraday, chi}; }

  bool reciprocal() const { return kind != ElementKind::kFaraday; }
  Operator forward() const;
};

/// HWP(θ) = R_y(2θ)·R_z(π)·R_y(−2θ) (det 1 convention).
Operator hwp(double theta);
/// QWP(θ) = R_y(2θ)·R_z(π/2)·R_y(−2θ).
Operator qwp(double theta);

/// Two-photon state over (path₁, pol₁, path₂, pol₂); H = 0, V = 1 in the
/// polarization slots, leftmost slot most significant.
class PhotonicState {
 public:
  explicit PhotonicState(StateVec amps);

  const StateVec& state() const { return amps_; }
  Cplx amp(int path1, int pol1, int path2, int pol2) const;
  double norm() const { return amps_.norm(); }

  static constexpr int kPath1 = 0;
  static constexpr int kPol1 = 1;
  static constexpr int kPath2 = 2;
  static constexpr int kPol2 = 3;

 private:
  StateVec amps_;
};

/// (|H⟩₁|H⟩₂ + i|V⟩₁|V⟩₂)/√2, both photons in path 0.
PhotonicState spdc_state();

/// Polarizing beam splitter on both photons: H keeps its path, V changes it.
PhotonicState pbs_encode(const PhotonicState& state);

/// Path-1 V→H flip, preparation rotation to cos θᵢ|H⟩ + sin θᵢ|V⟩, then the
/// composed V operator (product of the listed Jones factors, first listed
/// acting first; empty list = identity) on each photon's polarization.
PhotonicState prepare_inputs(const PhotonicState& state, double theta1, double theta2,
                             std::span<const Operator> v_a_elements,
                             std::span<const Operator> v_b_elements);

/// The Eq.-style nine-element gadget sequence, first-encountered element first.
std::vector<OpticalElement> gadget_sequence(const GadgetAngles& angles);

/// Composed forward Jones operator of an element sequence.
Operator forward_operator(std::span<const OpticalElement> sequence);

/// Backward-traversal operator: element order reversed, reciprocal elements
/// transposed, Faraday rotators kept as their forward matrix.
Operator backward_operator(std::span<const OpticalElement> sequence);

/// Forward operator of the full gadget.
Operator reciprocal_gadget(const GadgetAngles& angles);

/// Gadget angles from the direction-insensitive construction: mirrored
/// halves (θ₁ = θ₂ + π/2, φ₁ = φ₂ + π/2) with the core angle γ either on the
/// quarter grid (axis in the xz-plane) or free with the axis pinned to ±ŷ.
GadgetAngles random_reciprocal_gadget(std::mt19937_64& rng);

/// Variable beam splitter on a path qubit: |0⟩ → cos(θ/2)|0⟩ + sin(θ/2)|1⟩,
/// |1⟩ → sin(θ/2)|0⟩ − cos(θ/2)|1⟩.
Operator vbs(double theta);

/// Full optical pipeline: SPDC → PBS → input preparation (θ₁, θ₂ and the
/// V gates from `params`) → Sagnac switches → BS on photon 1 and VBS(θ) on
/// photon 2. With adaptive set, photon-1-path-1 components see VBS(π−θ).
PhotonicState sagnac_run(const CUParams& params, double theta1, double theta2,
                         double theta, bool adaptive);

/// Same pipeline with an explicit gate set (switch gates and V gates).
PhotonicState sagnac_run_with_gates(const ProtocolGateSet& gates, double theta1,
                                    double theta2, double theta, bool adaptive);

enum class DetectorPair { kM1M3, kM2M4, kM1M4, kM2M3 };

struct CoincidenceResult {
  double probability;
  StateVec polarization;  // renormalized 2-qubit (pol₁, pol₂) residual
};

/// Projects onto the detector pair's path combination (M1M3 = |00⟩,
/// M2M4 = |11⟩, M1M4 = |01⟩, M2M3 = |10⟩).
CoincidenceResult coincidence(const PhotonicState& state, DetectorPair pair);

/// Abstract branch corresponding to a detector pair: M1 = a:+, M2 = a:−,
/// M3 = b:μ, M4 = b:ν.
BranchClass detector_pair_class(DetectorPair pair);

/// Runs the adaptive photonic pipeline and the abstract protocol on the same
/// inputs and compares each coincidence-conditioned state with its branch
/// state, the class probabilities with 1/4, and the fed-forward residual with
/// CU·input.
Report photonic_vs_abstract(const CUParams& params, double theta1, double theta2,
                            double tol = kDefaultTol);

}  // namespace icogt

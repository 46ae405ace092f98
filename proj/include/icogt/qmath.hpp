#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace icogt {

using Cplx = std::complex<double>;

/// Default tolerance for max-norm comparisons throughout the library.
inline constexpr double kDefaultTol = 1e-9;

/// Real three-dimensional unit vector (rotation axis).
struct UnitVec3 {
  double x;
  double y;
  double z;

  /// Throws std::invalid_argument if |v| deviates from 1 by more than 1e-9.
  UnitVec3(double x_, double y_, double z_);

  /// Scales an arbitrary nonzero vector to unit length.
  static UnitVec3 normalized(double x_, double y_, double z_);

  double dot(const UnitVec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

/// Dense complex operator on k qubits (dimension 2^k).
class Operator {
 public:
  explicit Operator(Eigen::MatrixXcd m);

  static Operator identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  int n_qubits() const { return n_qubits_; }
  const Eigen::MatrixXcd& mat() const { return m_; }

  Operator adjoint() const { return Operator(m_.adjoint()); }
  Operator transpose() const { return Operator(m_.transpose()); }

  /// ||U†U - I||_max <= tol.
  bool is_unitary(double tol = 1e-12) const;

  Operator operator*(const Operator& o) const;
  Operator operator*(Cplx s) const { return Operator(s * m_); }
  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;

  double max_abs_diff(const Operator& o) const;

 private:
  Eigen::MatrixXcd m_;
  int n_qubits_;
};

inline Operator operator*(Cplx s, const Operator& a) { return a * s; }

/// Kronecker product of one or more factors, left factor most significant.
Operator tensor(std::span<const Operator> factors);
Operator tensor(const Operator& a, const Operator& b);
Operator tensor(const Operator& a, const Operator& b, const Operator& c);

const Operator& pauli_i();
const Operator& pauli_x();
const Operator& pauli_y();
const Operator& pauli_z();

/// n·σ for a unit axis n.
Operator axis_dot_sigma(const UnitVec3& n);

/// R_n(θ) = cos(θ/2)·I − i·sin(θ/2)·(n·σ).
Operator rotation(const UnitVec3& n, double theta);
Operator rotation_x(double theta);
Operator rotation_y(double theta);
Operator rotation_z(double theta);

/// Normalized state over an ordered qubit register. Qubit 0 is the leftmost
/// label and the most significant bit of the amplitude index.
class StateVec {
 public:
  StateVec(int n_qubits, Eigen::VectorXcd amps);

  static StateVec basis(int n_qubits, std::size_t index);
  static StateVec from_single_qubit(Cplx amp0, Cplx amp1);

  int n_qubits() const { return n_qubits_; }
  int dim() const { return static_cast<int>(amps_.size()); }
  const Eigen::VectorXcd& amps() const { return amps_; }
  Cplx amp(std::size_t index) const { return amps_(static_cast<Eigen::Index>(index)); }

  double norm() const { return amps_.norm(); }
  StateVec normalized() const;

  Cplx inner(const StateVec& o) const;
  double max_abs_diff(const StateVec& o) const;

 private:
  int n_qubits_;
  Eigen::VectorXcd amps_;
};

/// Tensor product of two registers, left register most significant.
StateVec tensor(const StateVec& a, const StateVec& b);

/// Orthonormal single-qubit measurement basis.
struct Basis2 {
  Eigen::Vector2cd v0;
  Eigen::Vector2cd v1;

  /// Throws std::invalid_argument unless {v0, v1} is orthonormal within 1e-12.
  Basis2(Eigen::Vector2cd v0_, Eigen::Vector2cd v1_);
};

Basis2 computational_basis();
Basis2 plus_minus_basis();

/// {|μ(θ)⟩, |ν(θ)⟩} with μ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩,
/// ν = sin(θ/2)|0⟩ − cos(θ/2)|1⟩.
Basis2 meas_basis_mu_nu(double theta);

struct PhaseMatch {
  bool equal;
  Cplx phase;        // e^{iφ} with B ≈ phase·A; meaningful when proportional
  double deviation;  // ||B − phase·A||_max, or +inf when not proportional
};

/// True iff B = e^{iφ}A within tol (max norm); the phase is extracted from the
/// flattened inner product ⟨A,B⟩/|⟨A,B⟩|.
PhaseMatch equal_up_to_global_phase(const Operator& a, const Operator& b,
                                    double tol = kDefaultTol);
PhaseMatch equal_up_to_global_phase(const StateVec& a, const StateVec& b,
                                    double tol = kDefaultTol);

/// Applies a 2^k-dimensional gate to the given target qubits. targets[0]
/// indexes the most significant bit of the gate's own basis ordering.
StateVec apply(const StateVec& state, const Operator& gate,
               std::span<const int> targets);
StateVec apply(const StateVec& state, const Operator& gate,
               std::initializer_list<int> targets);

/// Supplies measurement outcomes, either pseudo-randomly from a seeded
/// generator or from a forced list (consumed in order).
class OutcomeSource {
 public:
  static OutcomeSource sampled(std::uint64_t seed);
  static OutcomeSource forced(std::vector<int> outcomes);

  /// Returns 0 or 1 given the probability of outcome 0. A forced outcome
  /// whose probability is below 1e-14 throws ("impossible branch").
  int draw(double p0);

  bool is_forced() const { return !rng_.has_value(); }

 private:
  OutcomeSource() = default;
  std::optional<std::mt19937_64> rng_;
  std::vector<int> forced_;
  std::size_t next_ = 0;
};

struct MeasureResult {
  int outcome;
  double probability;
  StateVec post;  // same register size, measured qubit collapsed
};

/// Projective measurement of one qubit in the given basis. The post state is
/// renormalized; probabilities over both outcomes sum to 1 for a normalized
/// input.
MeasureResult measure(const StateVec& state, int qubit, const Basis2& basis,
                      OutcomeSource& source);

/// ⟨bra| contracted against one qubit; returns the (n−1)-qubit residual,
/// unnormalized. Plumbing for measurement and post-selection.
StateVec contract_qubit(const StateVec& state, int qubit,
                        const Eigen::Vector2cd& bra);

}  // namespace icogt

#include "icogt/qmath.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace icogt {

namespace {

constexpr Cplx kI{0.0, 1.0};

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(Eigen::Index n) {
  int k = 0;
  while ((Eigen::Index{1} << k) < n) ++k;
  return k;
}

}  // namespace

UnitVec3::UnitVec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(r) || std::abs(r - 1.0) > 1e-9) {
    throw std::invalid_argument("UnitVec3: vector norm " + std::to_string(r) +
                                " deviates from 1 by more than 1e-9");
  }
}

UnitVec3 UnitVec3::normalized(double x_, double y_, double z_) {
  const double r = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("UnitVec3::normalized: zero or non-finite vector");
  }
  return UnitVec3(x_ / r, y_ / r, z_ / r);
}

Operator::Operator(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || !is_power_of_two(m_.rows())) {
    throw std::invalid_argument("Operator: matrix must be square with power-of-two dimension");
  }
  n_qubits_ = log2_exact(m_.rows());
}

Operator Operator::identity(int dim) {
  return Operator(Eigen::MatrixXcd::Identity(dim, dim));
}

bool Operator::is_unitary(double tol) const {
  const Eigen::MatrixXcd g = m_.adjoint() * m_;
  return (g - Eigen::MatrixXcd::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::operator*(const Operator& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("Operator::operator*: dimension mismatch");
  return Operator(m_ * o.m_);
}

Operator Operator::operator+(const Operator& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("Operator::operator+: dimension mismatch");
  return Operator(m_ + o.m_);
}

Operator Operator::operator-(const Operator& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("Operator::operator-: dimension mismatch");
  return Operator(m_ - o.m_);
}

double Operator::max_abs_diff(const Operator& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("Operator::max_abs_diff: dimension mismatch");
  return (m_ - o.m_).cwiseAbs().maxCoeff();
}

Operator tensor(std::span<const Operator> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: at least one factor required");
  Eigen::MatrixXcd acc = factors[0].mat();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const Eigen::MatrixXcd& b = factors[f].mat();
    Eigen::MatrixXcd out(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i)
      for (Eigen::Index j = 0; j < acc.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
    acc = std::move(out);
  }
  return Operator(std::move(acc));
}

Operator tensor(const Operator& a, const Operator& b) {
  const Operator fs[] = {a, b};
  return tensor(std::span<const Operator>(fs));
}

Operator tensor(const Operator& a, const Operator& b, const Operator& c) {
  const Operator fs[] = {a, b, c};
  return tensor(std::span<const Operator>(fs));
}

const Operator& pauli_i() {
  static const Operator op = Operator::identity(2);
  return op;
}

const Operator& pauli_x() {
  static const Operator op{(Eigen::Matrix2cd() << 0, 1, 1, 0).finished()};
  return op;
}

const Operator& pauli_y() {
  static const Operator op{(Eigen::Matrix2cd() << 0, -kI, kI, 0).finished()};
  return op;
}

const Operator& pauli_z() {
  static const Operator op{(Eigen::Matrix2cd() << 1, 0, 0, -1).finished()};
  return op;
}

Operator axis_dot_sigma(const UnitVec3& n) {
  Eigen::Matrix2cd m;
  m << n.z, Cplx(n.x, -n.y), Cplx(n.x, n.y), -n.z;
  return Operator(m);
}

Operator rotation(const UnitVec3& n, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return Operator(c * Eigen::Matrix2cd::Identity() - kI * s * axis_dot_sigma(n).mat());
}

Operator rotation_x(double theta) { return rotation(UnitVec3(1, 0, 0), theta); }
Operator rotation_y(double theta) { return rotation(UnitVec3(0, 1, 0), theta); }
Operator rotation_z(double theta) { return rotation(UnitVec3(0, 0, 1), theta); }

StateVec::StateVec(int n_qubits, Eigen::VectorXcd amps)
    : n_qubits_(n_qubits), amps_(std::move(amps)) {
  if (n_qubits_ < 0 || n_qubits_ > 8) {
    throw std::invalid_argument("StateVec: register size must be 0..8 qubits");
  }
  if (amps_.size() != (Eigen::Index{1} << n_qubits_)) {
    throw std::invalid_argument("StateVec: amplitude count does not match register size");
  }
}

StateVec StateVec::basis(int n_qubits, std::size_t index) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  a(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVec(n_qubits, std::move(a));
}

StateVec StateVec::from_single_qubit(Cplx amp0, Cplx amp1) {
  Eigen::VectorXcd a(2);
  a << amp0, amp1;
  return StateVec(1, std::move(a));
}

StateVec StateVec::normalized() const {
  const double r = norm();
  if (r < 1e-300) throw std::runtime_error("StateVec::normalized: zero state");
  return StateVec(n_qubits_, amps_ / r);
}

Cplx StateVec::inner(const StateVec& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("StateVec::inner: dimension mismatch");
  return amps_.dot(o.amps_);
}

double StateVec::max_abs_diff(const StateVec& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("StateVec::max_abs_diff: dimension mismatch");
  return (amps_ - o.amps_).cwiseAbs().maxCoeff();
}

StateVec tensor(const StateVec& a, const StateVec& b) {
  Eigen::VectorXcd out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amps()(i) * b.amps();
  return StateVec(a.n_qubits() + b.n_qubits(), std::move(out));
}

Basis2::Basis2(Eigen::Vector2cd v0_, Eigen::Vector2cd v1_)
    : v0(std::move(v0_)), v1(std::move(v1_)) {
  const double tol = 1e-12;
  if (std::abs(v0.norm() - 1.0) > tol || std::abs(v1.norm() - 1.0) > tol ||
      std::abs(v0.dot(v1)) > tol) {
    throw std::invalid_argument("Basis2: vectors are not orthonormal within 1e-12");
  }
}

Basis2 computational_basis() {
  return Basis2(Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1));
}

Basis2 plus_minus_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  return Basis2(Eigen::Vector2cd(s, s), Eigen::Vector2cd(s, -s));
}

Basis2 meas_basis_mu_nu(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return Basis2(Eigen::Vector2cd(c, s), Eigen::Vector2cd(s, -c));
}

namespace {

PhaseMatch phase_match_impl(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tol) {
  const Cplx s = a.dot(b);  // conjugates a
  const double na = a.norm();
  const double nb = b.norm();
  if (std::abs(s) < 1e-14 * std::max(1.0, na * nb)) {
    if (na > tol && nb > tol) {
      return PhaseMatch{false, Cplx(0, 0), std::numeric_limits<double>::infinity()};
    }
    // both (near-)zero: trivially proportional
    return PhaseMatch{true, Cplx(1, 0), (b - a).cwiseAbs().maxCoeff()};
  }
  const Cplx phase = s / std::abs(s);
  const double dev = (b - phase * a).cwiseAbs().maxCoeff();
  return PhaseMatch{dev <= tol, phase, dev};
}

}  // namespace

PhaseMatch equal_up_to_global_phase(const Operator& a, const Operator& b, double tol) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("equal_up_to_global_phase: shape mismatch");
  }
  return phase_match_impl(a.mat().reshaped(), b.mat().reshaped(), tol);
}

PhaseMatch equal_up_to_global_phase(const StateVec& a, const StateVec& b, double tol) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("equal_up_to_global_phase: shape mismatch");
  }
  return phase_match_impl(a.amps(), b.amps(), tol);
}

StateVec apply(const StateVec& state, const Operator& gate, std::span<const int> targets) {
  const int n = state.n_qubits();
  const int k = static_cast<int>(targets.size());
  if (gate.dim() != (1 << k)) {
    throw std::invalid_argument("apply: gate dimension does not match target count");
  }
  unsigned seen = 0;
  for (int t : targets) {
    if (t < 0 || t >= n) throw std::invalid_argument("apply: target qubit out of range");
    if (seen & (1u << t)) throw std::invalid_argument("apply: duplicate target qubit");
    seen |= 1u << t;
  }

  // Bit position of qubit q in the amplitude index (qubit 0 is most significant).
  const auto bit_of = [n](int q) { return n - 1 - q; };

  const std::size_t dim = static_cast<std::size_t>(state.dim());
  const std::size_t gdim = std::size_t{1} << k;
  std::size_t target_mask = 0;
  for (int t : targets) target_mask |= std::size_t{1} << bit_of(t);

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  std::vector<std::size_t> idx(gdim);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & target_mask) continue;  // enumerate each target-cleared block once
    for (std::size_t g = 0; g < gdim; ++g) {
      std::size_t ix = base;
      for (int j = 0; j < k; ++j) {
        if (g & (std::size_t{1} << (k - 1 - j))) ix |= std::size_t{1} << bit_of(targets[j]);
      }
      idx[g] = ix;
    }
    for (std::size_t r = 0; r < gdim; ++r) {
      Cplx acc = 0.0;
      for (std::size_t c = 0; c < gdim; ++c) {
        acc += gate.mat()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) *
               state.amps()(static_cast<Eigen::Index>(idx[c]));
      }
      out(static_cast<Eigen::Index>(idx[r])) = acc;
    }
  }
  return StateVec(n, std::move(out));
}

StateVec apply(const StateVec& state, const Operator& gate, std::initializer_list<int> targets) {
  std::vector<int> t(targets);
  return apply(state, gate, std::span<const int>(t));
}

OutcomeSource OutcomeSource::sampled(std::uint64_t seed) {
  OutcomeSource s;
  s.rng_.emplace(seed);
  return s;
}

OutcomeSource OutcomeSource::forced(std::vector<int> outcomes) {
  OutcomeSource s;
  s.forced_ = std::move(outcomes);
  return s;
}

int OutcomeSource::draw(double p0) {
  if (rng_.has_value()) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(*rng_) < p0 ? 0 : 1;
  }
  if (next_ >= forced_.size()) {
    throw std::logic_error("OutcomeSource: forced outcome list exhausted");
  }
  const int o = forced_[next_++];
  if (o != 0 && o != 1) throw std::invalid_argument("OutcomeSource: forced outcome must be 0 or 1");
  const double p = (o == 0) ? p0 : 1.0 - p0;
  if (p < 1e-14) {
    throw std::runtime_error("OutcomeSource: impossible branch (forced outcome has probability < 1e-14)");
  }
  return o;
}

StateVec contract_qubit(const StateVec& state, int qubit, const Eigen::Vector2cd& bra) {
  const int n = state.n_qubits();
  if (qubit < 0 || qubit >= n) throw std::invalid_argument("contract_qubit: qubit out of range");
  const int bit = n - 1 - qubit;
  const std::size_t dim_out = std::size_t{1} << (n - 1);
  const std::size_t low_mask = (std::size_t{1} << bit) - 1;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(dim_out));
  for (std::size_t j = 0; j < dim_out; ++j) {
    const std::size_t hi = (j & ~low_mask) << 1;
    const std::size_t lo = j & low_mask;
    const std::size_t i0 = hi | lo;
    const std::size_t i1 = i0 | (std::size_t{1} << bit);
    out(static_cast<Eigen::Index>(j)) =
        std::conj(bra(0)) * state.amps()(static_cast<Eigen::Index>(i0)) +
        std::conj(bra(1)) * state.amps()(static_cast<Eigen::Index>(i1));
  }
  return StateVec(n - 1, std::move(out));
}

MeasureResult measure(const StateVec& state, int qubit, const Basis2& basis,
                      OutcomeSource& source) {
  const StateVec r0 = contract_qubit(state, qubit, basis.v0);
  const StateVec r1 = contract_qubit(state, qubit, basis.v1);
  const double n0 = r0.norm();
  const double n1 = r1.norm();
  const double total = n0 * n0 + n1 * n1;
  const double p0 = n0 * n0 / total;

  const int outcome = source.draw(p0);
  const double prob = (outcome == 0) ? p0 : 1.0 - p0;
  const StateVec& residual = (outcome == 0) ? r0 : r1;
  const Eigen::Vector2cd& ket = (outcome == 0) ? basis.v0 : basis.v1;
  if (residual.norm() < 1e-150) {
    throw std::runtime_error("measure: outcome has vanishing probability");
  }

  // Re-embed the collapsed qubit at its slot.
  const int n = state.n_qubits();
  const int bit = n - 1 - qubit;
  const std::size_t low_mask = (std::size_t{1} << bit) - 1;
  Eigen::VectorXcd post = Eigen::VectorXcd::Zero(state.dim());
  const Eigen::VectorXcd res = residual.amps() / residual.norm();
  for (std::size_t j = 0; j < static_cast<std::size_t>(res.size()); ++j) {
    const std::size_t hi = (j & ~low_mask) << 1;
    const std::size_t lo = j & low_mask;
    const std::size_t i0 = hi | lo;
    const std::size_t i1 = i0 | (std::size_t{1} << bit);
    post(static_cast<Eigen::Index>(i0)) = ket(0) * res(static_cast<Eigen::Index>(j));
    post(static_cast<Eigen::Index>(i1)) = ket(1) * res(static_cast<Eigen::Index>(j));
  }
  return MeasureResult{outcome, prob, StateVec(n, std::move(post))};
}

}  // namespace icogt

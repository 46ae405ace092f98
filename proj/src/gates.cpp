#include "icogt/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace icogt {

namespace {

constexpr Cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

}  // namespace

UnitVec3 orthogonal_axis(const UnitVec3& n) {
  // z_hat x n = (-n_y, n_x, 0)
  const double cx = -n.y;
  const double cy = n.x;
  const double r = std::sqrt(cx * cx + cy * cy);
  if (r > 1e-8) return UnitVec3(cx / r, cy / r, 0.0);
  return UnitVec3(1.0, 0.0, 0.0);
}

CUParams::CUParams(double alpha_, double theta_, const UnitVec3& n_)
    : alpha(alpha_), theta(theta_), n(n_), n_perp(orthogonal_axis(n_)) {}

CUParams::CUParams(double alpha_, double theta_, const UnitVec3& n_, const UnitVec3& n_perp_)
    : alpha(alpha_), theta(theta_), n(n_), n_perp(n_perp_) {
  if (std::abs(n.dot(n_perp)) > 1e-9) {
    throw std::invalid_argument("CUParams: n and n_perp are not orthogonal within 1e-9");
  }
}

Operator u_target(const CUParams& p) {
  const Cplx g = std::exp(kI * p.alpha);
  return Operator(g * (std::cos(p.theta) * Eigen::Matrix2cd::Identity() +
                       kI * std::sin(p.theta) * axis_dot_sigma(p.n).mat()));
}

Operator cu_gate(const CUParams& p) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m.block<2, 2>(2, 2) = u_target(p).mat();
  return Operator(m);
}

ProtocolGateSet protocol_gates(const CUParams& p) { return imperfect_gates(p, 0.0); }

ProtocolGateSet imperfect_gates(const CUParams& p, double delta) {
  const double s = 1.0 + delta;

  Operator u_a1 = rotation_z(kPi / 2.0);
  Operator u_a2 = Operator(s * pauli_x().mat());

  // R_n(pi/2) with the axis x-component scaled by (1+delta)
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd b1;
  b1 << Cplx(1.0, -p.n.z), Cplx(-p.n.y, -s * p.n.x),
        Cplx(p.n.y, -s * p.n.x), Cplx(1.0, p.n.z);
  Operator u_b1 = Operator(inv_sqrt2 * b1);

  Eigen::Matrix2cd b2;
  b2 << Cplx(p.n_perp.z, 0.0), Cplx(s * p.n_perp.x, -p.n_perp.y),
        Cplx(s * p.n_perp.x, p.n_perp.y), Cplx(-p.n_perp.z, 0.0);
  Operator u_b2 = Operator(b2);

  return ProtocolGateSet{std::move(u_a1), std::move(u_a2), std::move(u_b1),
                         std::move(u_b2), pauli_x(), axis_dot_sigma(p.n_perp)};
}

FeedforwardOps feedforward(BranchClass branch, const CUParams& p) {
  if (branch == BranchClass::kClassMu) {
    return FeedforwardOps{rotation_z(p.alpha + kPi / 2.0),
                          rotation(p.n, kPi / 2.0 - p.theta),
                          std::exp(kI * (p.alpha / 2.0))};
  }
  return FeedforwardOps{rotation_z(p.alpha - kPi / 2.0),
                        rotation(p.n, -kPi / 2.0 - p.theta),
                        kI * std::exp(kI * (p.alpha / 2.0))};
}

GatePreset preset(PresetName name) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (name) {
    case PresetName::kCnot:
      return {name, CUParams(-kPi / 2, kPi / 2, UnitVec3(1, 0, 0), UnitVec3(0, 0, 1))};
    case PresetName::kCz:
      return {name, CUParams(-kPi / 2, kPi / 2, UnitVec3(0, 0, 1), UnitVec3(1, 0, 0))};
    case PresetName::kCy:
      return {name, CUParams(-kPi / 2, kPi / 2, UnitVec3(0, 1, 0), UnitVec3(1, 0, 0))};
    case PresetName::kCh:
      return {name, CUParams(-kPi / 2, kPi / 2, UnitVec3(inv_sqrt2, 0, inv_sqrt2),
                             UnitVec3(0, 1, 0))};
  }
  throw std::invalid_argument("preset: unknown name");
}

std::optional<PresetName> preset_from_string(std::string_view s) {
  if (s == "cnot" || s == "CNOT") return PresetName::kCnot;
  if (s == "cz" || s == "CZ") return PresetName::kCz;
  if (s == "cy" || s == "CY") return PresetName::kCy;
  if (s == "ch" || s == "CH") return PresetName::kCh;
  return std::nullopt;
}

std::string preset_to_string(PresetName name) {
  switch (name) {
    case PresetName::kCnot: return "cnot";
    case PresetName::kCz: return "cz";
    case PresetName::kCy: return "cy";
    case PresetName::kCh: return "ch";
  }
  return "?";
}

}  // namespace icogt

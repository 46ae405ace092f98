#include "icogt/photonic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "icogt/protocol.hpp"

namespace icogt {

namespace {

constexpr Cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

/// Control on the first slot: |0⟩⟨0|⊗u0 + |1⟩⟨1|⊗u1.
Operator path_controlled(const Operator& u0, const Operator& u1) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.block<2, 2>(0, 0) = u0.mat();
  m.block<2, 2>(2, 2) = u1.mat();
  return Operator(m);
}

Operator rotation2_real(double t) {
  Eigen::Matrix2cd m;
  m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return Operator(m);
}

}  // namespace

Operator hwp(double theta) {
  return rotation_y(2 * theta) * rotation_z(kPi) * rotation_y(-2 * theta);
}

Operator qwp(double theta) {
  return rotation_y(2 * theta) * rotation_z(kPi / 2) * rotation_y(-2 * theta);
}

Operator OpticalElement::forward() const {
  switch (kind) {
    case ElementKind::kHwp: return icogt::hwp(angle);
    case ElementKind::kQwp: return icogt::qwp(angle);
    case ElementKind::kFaraday: return rotation_y(angle);
  }
  throw std::invalid_argument("OpticalElement: unknown kind");
}

PhotonicState::PhotonicState(StateVec amps) : amps_(std::move(amps)) {
  if (amps_.n_qubits() != 4) {
    throw std::invalid_argument("PhotonicState: expected 16 amplitudes (4 slots)");
  }
}

Cplx PhotonicState::amp(int path1, int pol1, int path2, int pol2) const {
  return amps_.amp(static_cast<std::size_t>(path1 * 8 + pol1 * 4 + path2 * 2 + pol2));
}

PhotonicState spdc_state() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(16);
  a(0) = s;       // |H,0>_1 |H,0>_2
  a(5) = kI * s;  // |V,0>_1 |V,0>_2
  return PhotonicState(StateVec(4, std::move(a)));
}

PhotonicState pbs_encode(const PhotonicState& state) {
  // On the (path, pol) pair: (p,H) -> (p,H), (p,V) -> (1-p,V).
  Eigen::Matrix4cd pbs = Eigen::Matrix4cd::Zero();
  pbs(0, 0) = 1;  // (0,H) -> (0,H)
  pbs(3, 1) = 1;  // (0,V) -> (1,V)
  pbs(2, 2) = 1;  // (1,H) -> (1,H)
  pbs(1, 3) = 1;  // (1,V) -> (0,V)
  const Operator op(pbs);
  StateVec s = apply(state.state(), op, {PhotonicState::kPath1, PhotonicState::kPol1});
  s = apply(s, op, {PhotonicState::kPath2, PhotonicState::kPol2});
  return PhotonicState(std::move(s));
}

PhotonicState prepare_inputs(const PhotonicState& state, double theta1, double theta2,
                             std::span<const Operator> v_a_elements,
                             std::span<const Operator> v_b_elements) {
  const auto compose = [](std::span<const Operator> els) {
    Operator acc = Operator::identity(2);
    for (const Operator& e : els) acc = e * acc;  // first listed acts first
    return acc;
  };

  const Operator flip = path_controlled(Operator::identity(2), pauli_x());
  StateVec s = apply(state.state(), flip, {PhotonicState::kPath1, PhotonicState::kPol1});
  s = apply(s, flip, {PhotonicState::kPath2, PhotonicState::kPol2});
  s = apply(s, compose(v_a_elements) * rotation2_real(theta1), {PhotonicState::kPol1});
  s = apply(s, compose(v_b_elements) * rotation2_real(theta2), {PhotonicState::kPol2});
  return PhotonicState(std::move(s));
}

std::vector<OpticalElement> gadget_sequence(const GadgetAngles& a) {
  // First-encountered element first (the rightmost factor of the product).
  return {OpticalElement::qwp(a.theta2),  OpticalElement::hwp(a.phi2),
          OpticalElement::faraday(kPi / 2), OpticalElement::qwp(kPi / 2),
          OpticalElement::hwp(a.gamma),   OpticalElement::qwp(kPi / 2),
          OpticalElement::faraday(-kPi / 2), OpticalElement::hwp(a.phi1),
          OpticalElement::qwp(a.theta1)};
}

Operator forward_operator(std::span<const OpticalElement> sequence) {
  Operator acc = Operator::identity(2);
  for (const OpticalElement& e : sequence) acc = e.forward() * acc;
  return acc;
}

Operator backward_operator(std::span<const OpticalElement> sequence) {
  // Reverse traversal: the forward-last element is met first.
  Operator acc = Operator::identity(2);
  for (auto it = sequence.rbegin(); it != sequence.rend(); ++it) {
    const Operator f = it->forward();
    acc = (it->reciprocal() ? f.transpose() : f) * acc;
  }
  return acc;
}

Operator reciprocal_gadget(const GadgetAngles& angles) {
  const std::vector<OpticalElement> seq = gadget_sequence(angles);
  return forward_operator(seq);
}

GadgetAngles random_reciprocal_gadget(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  std::uniform_int_distribution<int> quarter(0, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  GadgetAngles a{};
  a.theta1 = u(rng);
  if (coin(rng) == 0) {
    // Rotation axis in the xz-plane (4*phi1 - 2*theta1 = 0 mod pi), core angle
    // on the quarter grid: Pauli-type targets.
    a.phi1 = (2 * a.theta1 + quarter(rng) * kPi) / 4.0;
    a.gamma = kPi / 4 + quarter(rng) * kPi / 2;
  } else {
    // Rotation axis pinned to +/- y (4*phi1 - 2*theta1 = pi/2 mod pi), core
    // angle free: continuous y-rotation targets.
    a.phi1 = (kPi / 2 + 2 * a.theta1 + quarter(rng) * kPi) / 4.0;
    a.gamma = u(rng);
  }
  // Mirrored second half: H(phi2)Q(theta2) = [Q(theta1)H(phi1)]^{-1}.
  a.theta2 = a.theta1 + kPi / 2;
  a.phi2 = a.phi1 + kPi / 2;
  return a;
}

Operator vbs(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd m;
  m << c, s, s, -c;
  return Operator(m);
}

PhotonicState sagnac_run(const CUParams& params, double theta1, double theta2,
                         double theta, bool adaptive) {
  return sagnac_run_with_gates(protocol_gates(params), theta1, theta2, theta, adaptive);
}

PhotonicState sagnac_run_with_gates(const ProtocolGateSet& gates, double theta1,
                                    double theta2, double theta, bool adaptive) {
  const Operator v_a[] = {gates.v_a};
  const Operator v_b[] = {gates.v_b};
  PhotonicState st = prepare_inputs(pbs_encode(spdc_state()), theta1, theta2, v_a, v_b);

  // Sagnac loops: the counterclockwise (path 0) component sees U_1 then U_2,
  // the clockwise (path 1) component the reverse order.
  const Operator sw1 = path_controlled(gates.u_a2 * gates.u_a1, gates.u_a1 * gates.u_a2);
  const Operator sw2 = path_controlled(gates.u_b2 * gates.u_b1, gates.u_b1 * gates.u_b2);
  StateVec s = apply(st.state(), sw1, {PhotonicState::kPath1, PhotonicState::kPol1});
  s = apply(s, sw2, {PhotonicState::kPath2, PhotonicState::kPol2});

  // Balanced splitter on photon 1's path (real Hadamard convention).
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd bs;
  bs << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
  s = apply(s, Operator(bs), {PhotonicState::kPath1});

  if (adaptive) {
    s = apply(s, path_controlled(vbs(theta), vbs(kPi - theta)),
              {PhotonicState::kPath1, PhotonicState::kPath2});
  } else {
    s = apply(s, vbs(theta), {PhotonicState::kPath2});
  }
  return PhotonicState(std::move(s));
}

namespace {

std::pair<int, int> pair_paths(DetectorPair pair) {
  switch (pair) {
    case DetectorPair::kM1M3: return {0, 0};
    case DetectorPair::kM2M4: return {1, 1};
    case DetectorPair::kM1M4: return {0, 1};
    case DetectorPair::kM2M3: return {1, 0};
  }
  throw std::invalid_argument("coincidence: unknown detector pair");
}

}  // namespace

CoincidenceResult coincidence(const PhotonicState& state, DetectorPair pair) {
  const auto [p1, p2] = pair_paths(pair);
  const Eigen::Vector2cd bra1 = p1 == 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
  const Eigen::Vector2cd bra2 = p2 == 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
  StateVec res = contract_qubit(state.state(), PhotonicState::kPath1, bra1);
  res = contract_qubit(res, 1, bra2);  // path2 is slot 1 after removing path1
  const double prob = res.norm() * res.norm();
  if (prob < 1e-14) {
    throw std::runtime_error("coincidence: detector pair has vanishing probability");
  }
  return CoincidenceResult{prob, res.normalized()};
}

BranchClass detector_pair_class(DetectorPair pair) {
  const auto [p1, p2] = pair_paths(pair);
  const AOutcome a = (p1 == 0) ? AOutcome::kPlus : AOutcome::kMinus;
  const BOutcome b = (p2 == 0) ? BOutcome::kMu : BOutcome::kNu;
  return classify_branch(a, b);
}

Report photonic_vs_abstract(const CUParams& params, double theta1, double theta2,
                            double tol) {
  Report rep;
  const PhotonicState out = sagnac_run(params, theta1, theta2, params.theta, true);

  const InputQubit in_a(std::cos(theta1), std::sin(theta1));
  const InputQubit in_b(std::cos(theta2), std::sin(theta2));
  const StateVec cu_target =
      apply(tensor(in_a.state(), in_b.state()), cu_gate(params), {0, 1});

  const struct {
    DetectorPair pair;
    const char* name;
    int a_forced;
    int b_forced;
  } cases[] = {
      {DetectorPair::kM1M3, "m1m3", 0, 0},
      {DetectorPair::kM2M4, "m2m4", 1, 1},
      {DetectorPair::kM1M4, "m1m4", 0, 1},
      {DetectorPair::kM2M3, "m2m3", 1, 0},
  };

  for (const auto& c : cases) {
    const CoincidenceResult coin = coincidence(out, c.pair);
    rep.add(std::string("photonic/prob_") + c.name, std::abs(coin.probability - 0.25),
            1e-12);

    OutcomeSource forced = OutcomeSource::forced({c.a_forced, c.b_forced});
    const ProtocolTranscript tr = run_protocol(params, in_a, in_b, forced);

    // The coincidence residual is the pre-feed-forward branch state.
    const StateVec branch_state =
        apply(apply(tr.final_state, tr.feedforward_applied.w_a.adjoint(), {0}),
              tr.feedforward_applied.w_b.adjoint(), {1});
    const PhaseMatch pm_state = equal_up_to_global_phase(coin.polarization, branch_state, tol);
    rep.add(std::string("photonic/residual_") + c.name,
            std::isfinite(pm_state.deviation) ? pm_state.deviation : 1.0, tol);

    // Feeding the residual forward must land on CU * input up to phase.
    const FeedforwardOps ff = feedforward(detector_pair_class(c.pair), params);
    const StateVec corrected =
        apply(apply(coin.polarization, ff.w_a, {0}), ff.w_b, {1});
    const PhaseMatch pm_cu = equal_up_to_global_phase(corrected, cu_target, tol);
    rep.add(std::string("photonic/feedforward_") + c.name,
            std::isfinite(pm_cu.deviation) ? pm_cu.deviation : 1.0, tol);
  }
  return rep;
}

}  // namespace icogt

// Acceptance suite: end-to-end checks with pinned tolerances, one line per
// criterion. Exits nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "icogt/fidelity.hpp"
#include "icogt/gates.hpp"
#include "icogt/photonic.hpp"
#include "icogt/protocol.hpp"
#include "icogt/qmath.hpp"

using namespace icogt;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Cplx kImag{0.0, 1.0};

int g_failures = 0;

struct Outcome {
  bool passed;
  std::string detail;
};

void criterion(int index, const std::string& name, double budget_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception& e) {
    out = Outcome{false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = budget_seconds <= 0.0 || elapsed < budget_seconds;
  const bool passed = out.passed && in_budget;
  if (!passed) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.2fs%s)%s%s\n", passed ? "PASS" : "FAIL", index,
              name.c_str(), elapsed,
              in_budget ? "" : ", over budget",
              out.detail.empty() ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
}

std::vector<CUParams> all_presets() {
  return {preset(PresetName::kCnot).params, preset(PresetName::kCz).params,
          preset(PresetName::kCy).params, preset(PresetName::kCh).params};
}

CUParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::normal_distribution<double> g(0.0, 1.0);
  const double alpha = u(rng);
  const double theta = u(rng);
  double x = g(rng), y = g(rng), z = g(rng);
  return CUParams(alpha, theta, UnitVec3::normalized(x, y, z));
}

InputQubit random_input(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Cplx a0(g(rng), g(rng)), a1(g(rng), g(rng));
  const double r = std::sqrt(std::norm(a0) + std::norm(a1));
  return InputQubit(a0 / r, a1 / r);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

// --- criterion 1: protocol correctness --------------------------------------

Outcome protocol_correctness() {
  std::mt19937_64 rng(101);
  std::vector<CUParams> cases = all_presets();
  for (int t = 0; t < 100; ++t) cases.push_back(random_params(rng));

  double worst_state = 0.0, worst_phase = 0.0;
  for (const CUParams& p : cases) {
    const InputQubit ia = random_input(rng);
    const InputQubit ib = random_input(rng);
    const StateVec target = apply(tensor(ia.state(), ib.state()), cu_gate(p), {0, 1});
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        OutcomeSource src = OutcomeSource::forced({a, b});
        const ProtocolTranscript tr = run_protocol(p, ia, ib, src);
        const PhaseMatch pm = equal_up_to_global_phase(tr.final_state, target, 1e-9);
        worst_state = std::max(worst_state, std::isfinite(pm.deviation) ? pm.deviation : 1.0);
        const Cplx expected = feedforward(tr.outcome.branch_class, p).phase;
        worst_phase = std::max(worst_phase, std::abs(pm.phase - expected));
      }
    }
  }
  const bool ok = worst_state < 1e-9 && worst_phase < 1e-9;
  return {ok, "state dev " + fmt(worst_state) + ", phase dev " + fmt(worst_phase)};
}

// --- criterion 2: branch statistics ------------------------------------------

Outcome branch_statistics() {
  std::mt19937_64 rng(202);
  double worst_joint = 0.0, worst_class = 0.0;
  const Basis2 pm_basis = plus_minus_basis();
  for (int t = 0; t < 1000; ++t) {
    const CUParams p = random_params(rng);
    const ProtocolGateSet g = protocol_gates(p);
    const StateVec post = apply_switches(
        apply_local_v(prepare_initial(random_input(rng), random_input(rng)), g), g);

    // Direct projection-norm oracle over the four joint outcomes.
    double p_class_mu = 0.0, p_class_nu = 0.0;
    for (int a = 0; a < 2; ++a) {
      const Eigen::Vector2cd abra = (a == 0) ? pm_basis.v0 : pm_basis.v1;
      const double b_angle = (a == 0) ? p.theta : kPi - p.theta;
      const Basis2 mn = meas_basis_mu_nu(b_angle);
      const StateVec after_a = contract_qubit(post, 0, abra);
      for (int b = 0; b < 2; ++b) {
        const StateVec res = contract_qubit(after_a, 0, (b == 0) ? mn.v0 : mn.v1);
        const double prob = res.norm() * res.norm();
        worst_joint = std::max(worst_joint, std::abs(prob - 0.25));
        const bool mu_class = (a == 0) == (b == 0);
        (mu_class ? p_class_mu : p_class_nu) += prob;
      }
    }
    worst_class = std::max({worst_class, std::abs(p_class_mu - 0.5),
                            std::abs(p_class_nu - 0.5)});
  }
  const bool ok = worst_joint < 1e-12 && worst_class < 1e-12;
  return {ok, "joint dev " + fmt(worst_joint) + ", class dev " + fmt(worst_class)};
}

// --- criterion 3: appendix suite ---------------------------------------------

Outcome appendix_suite() {
  std::mt19937_64 rng(303);
  double worst_identity = 0.0, worst_reconstruction = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Report rep = verify_appendix(random_params(rng), 1e-12, 1e-10);
    for (const CheckResult& c : rep.checks) {
      if (!c.passed) {
        return {false, "check " + c.name + " deviated by " + fmt(c.max_deviation)};
      }
      if (c.name.find("rzn") != std::string::npos || c.name.find("cu_") != std::string::npos) {
        worst_reconstruction = std::max(worst_reconstruction, c.max_deviation);
      } else {
        worst_identity = std::max(worst_identity, c.max_deviation);
      }
    }
  }
  const bool ok = worst_identity < 1e-12 && worst_reconstruction < 1e-10;
  return {ok, "identities " + fmt(worst_identity) + ", reconstructions " +
                  fmt(worst_reconstruction)};
}

// --- criterion 4: fidelity exactness -----------------------------------------

Outcome fidelity_exactness() {
  double worst = 0.0;
  for (const CUParams& p : all_presets()) {
    const double f = average_fidelity(FidelityQuery{p, 0.0, BranchPolicy::kClassMu,
                                                    IntegratorConfig{64}});
    worst = std::max(worst, std::abs(f - 1.0));
  }
  for (const PresetName name : {PresetName::kCy, PresetName::kCz}) {
    const CUParams p = preset(name).params;
    for (int i = 0; i < 101; ++i) {
      const double delta = -0.5 + i * 0.01;
      const double f = average_fidelity(FidelityQuery{p, delta, BranchPolicy::kClassMu,
                                                      IntegratorConfig{64}});
      worst = std::max(worst, std::abs(f - 1.0));
    }
  }
  return {worst < 1e-9, "max |F - 1| = " + fmt(worst)};
}

// --- criterion 5: fidelity oracle agreement ----------------------------------

/// Monte Carlo oracle with a direct closed-form integrand: the branch state is
/// assembled from the scaled gate matrices without the protocol machinery.
double mc_oracle(const CUParams& p, double delta, std::size_t samples,
                 std::uint64_t seed, double* standard_error) {
  using M2 = Eigen::Matrix2cd;
  using M4 = Eigen::Matrix4cd;
  const auto kron = [](const M2& a, const M2& b) {
    M4 out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
  };
  const auto smu_of = [&](double d) {
    const double s = 1.0 + d;
    M2 ua1, ua2, ub1, ub2;
    ua1 << std::exp(-kImag * (kPi / 4)), 0, 0, std::exp(kImag * (kPi / 4));
    ua2 << 0, s, s, 0;
    ub1 << Cplx(1, -p.n.z), Cplx(-p.n.y, -s * p.n.x), Cplx(p.n.y, -s * p.n.x),
        Cplx(1, p.n.z);
    ub1 /= std::sqrt(2.0);
    ub2 << p.n_perp.z, Cplx(s * p.n_perp.x, -p.n_perp.y),
        Cplx(s * p.n_perp.x, p.n_perp.y), -p.n_perp.z;
    const M4 m0 = kron(ua2 * ua1, ub2 * ub1);
    const M4 m1 = kron(ua1 * ua2, ub1 * ub2);
    return M4(std::cos(p.theta / 2) * m0 + kImag * std::sin(p.theta / 2) * m1);
  };
  M2 x, nperp;
  x << 0, 1, 1, 0;
  nperp << p.n_perp.z, Cplx(p.n_perp.x, -p.n_perp.y), Cplx(p.n_perp.x, p.n_perp.y),
      -p.n_perp.z;
  const M4 ideal = smu_of(0.0);
  const M4 prac = smu_of(delta);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t1 = u(rng), t2 = u(rng);
    const Eigen::Vector2cd in1 = x * Eigen::Vector2cd(std::cos(t1), std::sin(t1));
    const Eigen::Vector2cd in2 = nperp * Eigen::Vector2cd(std::cos(t2), std::sin(t2));
    Eigen::Vector4cd prod;
    prod << in1(0) * in2(0), in1(0) * in2(1), in1(1) * in2(0), in1(1) * in2(1);
    const Eigen::Vector4cd a = ideal * prod;
    Eigen::Vector4cd b = prac * prod;
    b /= b.norm();
    const double f = std::norm((a / a.norm()).dot(b));
    sum += f;
    sum_sq += f * f;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = sum_sq / static_cast<double>(samples) - mean * mean;
  *standard_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  return mean;
}

Outcome fidelity_oracle_agreement() {
  std::string detail;
  bool ok = true;
  int case_idx = 0;
  for (const PresetName name : {PresetName::kCnot, PresetName::kCh}) {
    const CUParams p = preset(name).params;
    for (const double delta : {-0.3, 0.1, 0.4}) {
      const double grid = average_fidelity(FidelityQuery{p, delta, BranchPolicy::kClassMu,
                                                         IntegratorConfig{64}});
      double se = 0.0;
      const double mc = mc_oracle(p, delta, 1000000, 5050 + case_idx, &se);
      const double gap = std::abs(grid - mc);
      if (gap > 3.0 * se) {
        ok = false;
        detail += preset_to_string(name) + " delta " + fmt(delta) + ": |grid-mc| " +
                  fmt(gap) + " > 3se " + fmt(3.0 * se) + "; ";
      }
      ++case_idx;
    }
  }
  if (ok) detail = "all six (preset, delta) points within 3 standard errors";
  return {ok, detail};
}

// --- criterion 6: photonic layer equivalence ---------------------------------

Outcome photonic_equivalence() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  double worst_eq22 = 0.0, worst_residual = 0.0, worst_prob = 0.0;

  for (const CUParams& p : all_presets()) {
    for (int t = 0; t < 50; ++t) {
      const double t1 = u(rng), t2 = u(rng);

      // Non-adaptive output against the four bracketed operators.
      const PhotonicState out = sagnac_run(p, t1, t2, p.theta, false);
      const ProtocolGateSet g = protocol_gates(p);
      const Operator m0 = tensor(g.u_a2 * g.u_a1, g.u_b2 * g.u_b1);
      const Operator m1 = tensor(g.u_a1 * g.u_a2, g.u_b1 * g.u_b2);
      const double c = std::cos(p.theta / 2), s = std::sin(p.theta / 2);
      const Eigen::Vector2cd psi1 = g.v_a.mat() * Eigen::Vector2cd(std::cos(t1), std::sin(t1));
      const Eigen::Vector2cd psi2 = g.v_b.mat() * Eigen::Vector2cd(std::cos(t2), std::sin(t2));
      Eigen::Vector4cd pol;
      pol << psi1(0) * psi2(0), psi1(0) * psi2(1), psi1(1) * psi2(0), psi1(1) * psi2(1);
      const Eigen::Matrix4cd ops[2][2] = {
          {c * m0.mat() + kImag * s * m1.mat(), s * m0.mat() - kImag * c * m1.mat()},
          {c * m0.mat() - kImag * s * m1.mat(), s * m0.mat() + kImag * c * m1.mat()}};
      for (int p1 = 0; p1 < 2; ++p1) {
        for (int p2 = 0; p2 < 2; ++p2) {
          const Eigen::Vector4cd expect = 0.5 * (ops[p1][p2] * pol);
          for (int q1 = 0; q1 < 2; ++q1)
            for (int q2 = 0; q2 < 2; ++q2)
              worst_eq22 = std::max(
                  worst_eq22, std::abs(out.amp(p1, q1, p2, q2) - expect(q1 * 2 + q2)));
        }
      }

      // Adaptive coincidences against the abstract branch states.
      const PhotonicState adaptive = sagnac_run(p, t1, t2, p.theta, true);
      const InputQubit ia(std::cos(t1), std::sin(t1));
      const InputQubit ib(std::cos(t2), std::sin(t2));
      const struct {
        DetectorPair pair;
        int a;
        int b;
      } cases[] = {{DetectorPair::kM1M3, 0, 0},
                   {DetectorPair::kM2M4, 1, 1},
                   {DetectorPair::kM1M4, 0, 1},
                   {DetectorPair::kM2M3, 1, 0}};
      for (const auto& cse : cases) {
        const CoincidenceResult coin = coincidence(adaptive, cse.pair);
        worst_prob = std::max(worst_prob, std::abs(coin.probability - 0.25));
        OutcomeSource src = OutcomeSource::forced({cse.a, cse.b});
        const StateVec post =
            measure_ancillas(apply_switches(apply_local_v(prepare_initial(ia, ib), g), g),
                             p.theta, src)
                .post_state;
        const PhaseMatch pm = equal_up_to_global_phase(coin.polarization, post, 1e-9);
        worst_residual = std::max(worst_residual,
                                  std::isfinite(pm.deviation) ? pm.deviation : 1.0);
      }
    }
  }
  const bool ok = worst_eq22 <= 1e-12 && worst_residual < 1e-9 && worst_prob < 1e-12;
  return {ok, "eq22 " + fmt(worst_eq22) + ", residual " + fmt(worst_residual) +
                  ", prob " + fmt(worst_prob)};
}

// --- criterion 7: gadget identities ------------------------------------------

Outcome gadget_identities() {
  const PhaseMatch ua1 = equal_up_to_global_phase(
      rotation_z(kPi / 2), qwp(kPi / 4) * hwp(3 * kPi / 8) * qwp(kPi / 4), 1e-10);
  const GadgetAngles x_angles{3 * kPi / 4, 7 * kPi / 8, 3 * kPi / 4, 3 * kPi / 8, kPi / 4};
  const PhaseMatch ua2 =
      equal_up_to_global_phase(pauli_x(), reciprocal_gadget(x_angles), 1e-10);

  std::mt19937_64 rng(707);
  double worst_recip = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::vector<OpticalElement> seq = gadget_sequence(random_reciprocal_gadget(rng));
    const PhaseMatch pm =
        equal_up_to_global_phase(forward_operator(seq), backward_operator(seq), 1e-10);
    worst_recip = std::max(worst_recip, std::isfinite(pm.deviation) ? pm.deviation : 1.0);
  }
  const bool ok = ua1.equal && ua2.equal && worst_recip < 1e-10;
  return {ok, "ua1 " + fmt(ua1.deviation) + ", ua2 " + fmt(ua2.deviation) +
                  ", reciprocity " + fmt(worst_recip)};
}

// --- criterion 8: resource ledger --------------------------------------------

Outcome resource_ledger() {
  std::mt19937_64 rng(808);
  for (int t = 0; t < 200; ++t) {
    const CUParams p = (t < 4) ? all_presets()[static_cast<std::size_t>(t)]
                               : random_params(rng);
    OutcomeSource src = (t % 2 == 0)
                            ? OutcomeSource::sampled(4000 + static_cast<std::uint64_t>(t))
                            : OutcomeSource::forced({t % 2, (t / 2) % 2});
    const ProtocolTranscript tr = run_protocol(p, random_input(rng), random_input(rng), src);
    if (tr.ledger.ebits != 1 || tr.ledger.cbits != 2 || tr.ledger.switches != 2) {
      return {false, "ledger (" + std::to_string(tr.ledger.ebits) + "," +
                         std::to_string(tr.ledger.cbits) + "," +
                         std::to_string(tr.ledger.switches) + ") at trial " +
                         std::to_string(t)};
    }
  }
  return {true, "1 ebit, 2 cbits, 2 switches in all 200 transcripts"};
}

// --- criterion 9: determinism ------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
#ifndef ICOGT_CLI_PATH
  return {false, "cli path not configured"};
#else
  const std::string cli = ICOGT_CLI_PATH;
  const struct {
    std::string args;
    std::string stem;
  } cases[] = {
      {"sweep --steps 5 --grid 8 --presets cnot,cy,cz,ch -o ", "acc_sweep"},
      {"verify --preset cnot --trials 10 --seed 21 -o ", "acc_verify"},
      {"photonic --preset cz --trials 5 --seed 22 -o ", "acc_photonic"},
  };
  for (const auto& c : cases) {
    const std::string p1 = "/tmp/icogt_" + c.stem + "_1";
    const std::string p2 = "/tmp/icogt_" + c.stem + "_2";
    const std::string base = cli + " " + c.args;
    if (std::system((base + p1 + " >/dev/null 2>&1").c_str()) != 0 ||
        std::system((base + p2 + " >/dev/null 2>&1").c_str()) != 0) {
      return {false, c.stem + ": invocation failed"};
    }
    const std::string a = slurp(p1), b = slurp(p2);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    if (a.empty() || a != b) return {false, c.stem + ": outputs differ"};
  }
  return {true, "sweep/verify/photonic outputs byte-identical across reruns"};
#endif
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion(1, "protocol correctness across presets, random parameters and branches", 5.0,
            protocol_correctness);
  criterion(2, "branch statistics: 1/2 per class and 1/4 per joint outcome", 5.0,
            branch_statistics);
  criterion(3, "operator-identity suite at 1e-12 / 1e-10", 2.0, appendix_suite);
  criterion(4, "unit average fidelity at delta 0 and for CY/CZ across the sweep", 30.0,
            fidelity_exactness);
  criterion(5, "grid quadrature against the Monte Carlo oracle (3 standard errors)", 0.0,
            fidelity_oracle_agreement);
  criterion(6, "photonic amplitudes, coincidence residuals and probabilities", 10.0,
            photonic_equivalence);
  criterion(7, "waveplate gadget identities and reciprocity", 0.0, gadget_identities);
  criterion(8, "resource ledger: 1 ebit, 2 cbits, 2 switches", 0.0, resource_ledger);
  criterion(9, "byte-identical CLI outputs for identical seeds", 0.0, determinism);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}

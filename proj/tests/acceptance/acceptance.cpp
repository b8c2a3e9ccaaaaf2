// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qct/applications.hpp"
#include "qct/ct_reduction.hpp"
#include "qct/di_protocol.hpp"
#include "qct/harness.hpp"

using namespace qct;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

[[gnu::format(printf, 1, 2)]] std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// 1. Uniform average of the 4^n Pauli channels is the completely depolarizing channel.
Outcome pauli_average() {
  double worst = 0.0;
  for (int n : {1, 2}) {
    const Index d = dim_of(n);
    // Choi of Omega is I/d on (in ⊗ out).
    const Matrix omega = Matrix::Identity(d * d, d * d) / static_cast<double>(d);
    worst = std::max(worst, max_abs(key_average(pauli_keyed_family(n)).choi() - omega));
  }
  return {worst <= 1e-12, fmt("max entry error %.3g (tol 1e-12)", worst)};
}

// 2. tr(X rho) <= tr(X sigma) + ||rho - sigma||_tr for effects X.
Outcome measurement_continuity() {
  oracle::Gen g(20240601);
  int violations = 0;
  double slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 200; ++t) {
    const Index d = Index{2} << (t % 3);
    const Matrix x = g.effect(d), rho = g.density(d), sigma = g.density(d);
    const double lhs = (x * rho).trace().real();
    const double rhs = (x * sigma).trace().real() + oracle::hermitian_trace_norm(rho - sigma);
    const double lib = trace_norm(rho - sigma);
    if (lhs > rhs + 1e-9 || std::abs(lib - oracle::hermitian_trace_norm(rho - sigma)) > 1e-9) ++violations;
    slack = std::min(slack, rhs - lhs);
  }
  return {violations == 0, fmt("%d violations in 200 triples, min slack %.3g", violations, slack)};
}

// 3. Swap-test acceptance laws for pure and mixed pairs.
Outcome swap_laws() {
  oracle::Gen g(3);
  double worst = 0.0;
  for (Index d : {2, 4}) {
    const SwapTest st(d);
    for (int t = 0; t < 20; ++t) {
      const Vector a = g.unit(d), b = g.unit(d);
      worst = std::max(worst, std::abs(st.symmetric_probability(oracle::projector(oracle::kron(a, b))) -
                                       (1.0 + std::norm(a.dot(b))) / 2.0));
      const Matrix r = g.density(d), s = g.density(d);
      worst = std::max(worst, std::abs(st.symmetric_probability(oracle::kron(r, s)) -
                                       (1.0 + (r * s).trace().real()) / 2.0));
    }
  }
  return {worst <= 1e-9, fmt("max deviation %.3g over 80 pairs (tol 1e-9)", worst)};
}

// 4. Copy-stage distances equal 2 sqrt(1 - (1-p)^2) and 2 sqrt(1 - p^2), below 3 sqrt(.).
Outcome copy_distortion() {
  double worst = 0.0;
  bool strict = true;
  for (int i = 1; i <= 10; ++i) {
    const double p = i / 11.0;
    const auto cs = copy_stage(rotation_verifier(p), PureState::basis(2, 1).amplitudes());
    const double d0 = oracle::hermitian_trace_norm(oracle::projector(cs.phi_prime) - oracle::projector(cs.copy_zero));
    const double d1 = oracle::hermitian_trace_norm(oracle::projector(cs.phi_prime) - oracle::projector(cs.copy_one));
    worst = std::max({worst, std::abs(d0 - 2.0 * std::sqrt(1.0 - (1.0 - p) * (1.0 - p))),
                      std::abs(d1 - 2.0 * std::sqrt(1.0 - p * p))});
    strict = strict && d0 < 3.0 * std::sqrt(p) && d1 < 3.0 * std::sqrt(1.0 - p);
  }
  return {worst <= 1e-9 && strict, fmt("max deviation %.3g at 10 values of p, majorants strict: ", worst) +
                                       (strict ? "yes" : "no")};
}

// 5. YES side: accepted witnesses follow C0 within 3 sqrt(eps).
Outcome yes_side() {
  double rot = 0.0, exact = 0.0;
  bool dims = true;
  for (double delta : {1.0, 0.5}) {
    const auto v = rotation_verifier(0.96);
    const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.04, delta);
    const auto cert = certify_yes(inst, v, 5);
    for (const auto& p : cert.probes) rot = std::max(rot, p.distance);
    const int h = inst.witness_qubits, f = inst.dummy_qubits;
    dims = dims && std::exp2(f) >= std::exp2((h + f) * (1.0 - delta)) - 1e-12;

    ToyVerifierSpec s;
    s.kind = "target_state";
    const auto t = make_toy_verifier(s);
    const auto tinst = build_ct_circuit(t, identity_family(), depolarizing_family(), 0.0, delta);
    for (const auto& p : certify_yes(tinst, t, 5).probes) exact = std::max(exact, p.distance);
  }
  return {rot <= 0.6 && exact <= 1e-9 && dims,
          fmt("rotation max %.4f (bound 0.6), target-state max %.3g, dummy dimension ok: ", rot, exact) +
              (dims ? "yes" : "no")};
}

// 6. NO side: rejected inputs follow C1 within 3 sqrt(eps).
Outcome no_side() {
  ToyVerifierSpec s;
  s.kind = "always_reject";
  const auto rej = make_toy_verifier(s);
  const auto inst0 = build_ct_circuit(rej, identity_family(), depolarizing_family(), 0.04, 1.0);
  const auto c0 = certify_no(inst0, rej, 20, 6, 50);
  double zero = 0.0;
  for (const auto& p : c0.probes) zero = std::max(zero, p.distance);

  const auto v = rotation_verifier(0.04);
  const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.04, 1.0);
  const auto c = certify_no(inst, v, 20, 6, 50);
  double sampled = 0.0;
  for (const auto& p : c.probes) sampled = std::max(sampled, p.distance);
  const bool ok = c0.probes.size() == 50 && zero <= 1e-9 && sampled <= 0.6 + 1e-6 && c.diamond_lower_bound <= 0.6 + 1e-6;
  return {ok, fmt("always-reject max %.3g; eps=0.04 sampled max %.4f, ascent %.4f (bound 0.6)", zero, sampled,
                  c.diamond_lower_bound)};
}

// 7. Diamond ascent reaches the analytic values.
Outcome diamond_values() {
  const double d1 = diamond_distance(QuantumChannel::identity(1), depolarizing(1, 1), 20, 7).lower_bound;
  const double d2 = diamond_distance(QuantumChannel::identity(2), depolarizing(2, 2), 20, 7).lower_bound;
  const double dx =
      diamond_distance(QuantumChannel::identity(1), QuantumChannel::unitary(oracle::pauli_x()), 20, 7).lower_bound;
  const bool ok = std::abs(d1 - 1.5) <= 1e-6 && std::abs(d2 - 1.875) <= 1e-6 && std::abs(dx - 2.0) <= 1e-6;
  return {ok, fmt("id-vs-omega 1q %.10f, 2q %.10f, id-vs-X %.10f", d1, d2, dx)};
}

// 8. Protocol gap: identical proofs always pass against the identity family;
//    the one-qubit pad caps acceptance at 3/4.
Outcome protocol_gap() {
  const auto insecure = make_instance(key_ignoring_family(1, 2), 0.0, 1.0, Provenance::Custom);
  const double complete = exact_accept_probability(insecure, doubled_proof(random_pure_state(4, 8))).probability;
  const auto secure = build_secure_instance(1, 0.0);
  const auto opt = optimal_proof_accept(secure);
  const auto sampled = run_protocol_sampled(secure, DensityOperator::from_pure(opt.proof), 100000, 8);
  const double gap = complete - opt.probability;
  const bool ok = std::abs(complete - 1.0) <= 1e-9 && std::abs(opt.probability - 0.75) <= 1e-9 &&
                  sampled.ci95.lo <= 0.75 && 0.75 <= sampled.ci95.hi && gap >= 0.25 - 1e-6;
  return {ok, fmt("completeness %.12f, optimal proof %.12f, gap %.6f", complete, opt.probability, gap) +
                  fmt("; sampled %.5f in [%.5f, %.5f]", sampled.probability, sampled.ci95.lo, sampled.ci95.hi)};
}

// 9. Privacy verdicts.
Outcome privacy() {
  const auto otp = check_eps_private(pauli_keyed_family(1), pauli_decrypt_family(1), 0.01);
  const auto ign = check_eps_private(key_ignoring_family(1, 2), key_ignoring_family(1, 2), 0.1);
  const bool ok = otp.verdict == PrivacyVerdict::ConsistentWithPrivate && otp.decryption_distance <= 1e-9 &&
                  otp.average_distance <= 1e-9 && ign.verdict == PrivacyVerdict::Violates &&
                  ign.average_distance >= 1.5 - 1e-6;
  return {ok, fmt("pad d1 %.3g d2 %.3g; key-ignoring d2 %.10f", otp.decryption_distance, otp.average_distance,
                  ign.average_distance)};
}

// 10. The four application statistics on channels with known answers.
Outcome applications() {
  SearchOptions o;
  o.seed = 10;
  oracle::Gen g(10);
  const double s_unitary = min_output_entropy(QuantumChannel::unitary(g.unitary(4)), o).statistic;
  const double s_omega1 = min_output_entropy(depolarizing(1, 1), o).statistic;
  const double s_omega2 = min_output_entropy(depolarizing(2, 2), o).statistic;

  const auto half = QuantumChannel::identity(1).mix(depolarizing(1, 1), 0.5);
  const double s_half = min_output_entropy(half, o).statistic;
  double grid = std::numeric_limits<double>::infinity();
  for (const auto& v : oracle::bloch_grid(1000)) grid = std::min(grid, oracle::entropy_bits(half.apply(oracle::projector(v))));

  const double fp_id = pure_fixed_point_search(QuantumChannel::identity(1), o).statistic;
  Matrix j = Matrix::Zero(4, 4);
  j(1, 1) = 1.0;
  j(2, 2) = 1.0;
  const double fp_mx = pure_fixed_point_search(QuantumChannel(1, 1, j), o).statistic;
  const double iso = nonisometry_stat(to_channel(CircuitBuilder(2).trace_out({1}).build()), o).statistic;

  const bool ok = std::abs(s_unitary) <= 1e-9 && std::abs(s_omega1 - 1.0) <= 1e-9 && std::abs(s_omega2 - 2.0) <= 1e-9 &&
                  std::abs(s_half - grid) <= 1e-3 && std::abs(fp_id) <= 1e-9 && fp_mx >= 1.0 - 1e-6 && iso <= 0.5 + 1e-9;
  return {ok, fmt("entropy unitary %.3g, omega %.10f/%.10f", s_unitary, s_omega1, s_omega2) +
                  fmt("; half-depolarizing %.7f vs grid %.7f; fixed point id %.3g", s_half, grid, fp_id) +
                  fmt(", measure-then-X %.8f; nonisometry %.8f", fp_mx, iso)};
}

// 11. Full-suite report is byte-identical across two runs.
Outcome determinism() {
  const auto path = std::filesystem::path(QCT_SOURCE_DIR) / "data" / "configs" / "full_suite.json";
  const auto cfg = harness::load_config(path.string());
  const auto rows1 = harness::run_experiment(cfg);
  const auto rows2 = harness::run_experiment(cfg);
  const std::string a = harness::format_report(cfg, rows1);
  const std::string b = harness::format_report(cfg, rows2);
  std::size_t passed = 0;
  for (const auto& r : rows1) passed += r.pass ? 1 : 0;
  return {a == b && passed == rows1.size(), fmt("%.0f bytes, identical: ", static_cast<double>(a.size())) +
                                                (a == b ? "yes" : "no") +
                                                fmt(", rows passing %.0f/%.0f", static_cast<double>(passed),
                                                    static_cast<double>(rows1.size()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"pauli key average equals depolarizing channel", pauli_average},
      {"measurement continuity on 200 random triples", measurement_continuity},
      {"swap-test pure and mixed pair laws", swap_laws},
      {"copy-stage distances match closed forms", copy_distortion},
      {"accepting side within 3*sqrt(eps) of C0", yes_side},
      {"rejecting side within 3*sqrt(eps) of C1", no_side},
      {"diamond ascent reaches analytic values", diamond_values},
      {"swap protocol completeness/soundness gap", protocol_gap},
      {"eps-private verdicts", privacy},
      {"application statistics on known channels", applications},
      {"full-suite report determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s AC%-2d %-48s %s [%.0f ms]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), ms);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}

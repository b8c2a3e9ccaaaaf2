#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "qct/applications.hpp"
#include "qct/channel_algebra.hpp"
#include "qct/ct_reduction.hpp"
#include "qct/di_protocol.hpp"
#include "qct/harness.hpp"
#include "qct/verifier.hpp"

namespace qct::harness {

ReportRow at_most(std::string experiment, std::string claim, double measured, double bound) {
  return {std::move(experiment), std::move(claim), measured, bound, Relation::AtMost, 0.0, measured <= bound, 0.0};
}

ReportRow at_least(std::string experiment, std::string claim, double measured, double bound) {
  return {std::move(experiment), std::move(claim), measured, bound, Relation::AtLeast, 0.0, measured >= bound, 0.0};
}

ReportRow within(std::string experiment, std::string claim, double measured, double expected, double tolerance) {
  return {std::move(experiment), std::move(claim), measured, expected, Relation::Within, tolerance,
          std::abs(measured - expected) <= tolerance, 0.0};
}

ReportRow holds(std::string experiment, std::string claim, bool outcome) {
  return {std::move(experiment), std::move(claim), outcome ? 1.0 : 0.0, 1.0, Relation::AtLeast, 0.0, outcome, 0.0};
}

namespace {

// Typed access to one params object; unknown keys are rejected by finish().
class Params {
 public:
  Params(const Json& doc, std::string prefix) : doc_(doc), prefix_(std::move(prefix)) {}

  double number(const char* key, double fallback, double lo, double hi) {
    used_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return fallback;
    if (!it->is_number()) throw UsageError(path(key), "expected a number");
    const double v = it->get<double>();
    if (!(v >= lo && v <= hi)) throw UsageError(path(key), "must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
    return v;
  }

  int integer(const char* key, int fallback, int lo, int hi) {
    used_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return fallback;
    if (!it->is_number_integer()) throw UsageError(path(key), "expected an integer");
    const auto v = it->get<long long>();
    if (v < lo || v > hi) throw UsageError(path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
  }

  std::vector<double> numbers(const char* key, std::vector<double> fallback, double lo, double hi, bool lo_open) {
    used_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return fallback;
    if (!it->is_array() || it->empty()) throw UsageError(path(key), "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& e = (*it)[i];
      const std::string p = path(key) + "[" + std::to_string(i) + "]";
      if (!e.is_number()) throw UsageError(p, "expected a number");
      const double v = e.get<double>();
      if (!((lo_open ? v > lo : v >= lo) && v <= hi)) {
        throw UsageError(p, std::string("must lie in ") + (lo_open ? "(" : "[") + fmt(lo) + ", " + fmt(hi) + "]");
      }
      out.push_back(v);
    }
    return out;
  }

  Params child(const char* key) {
    used_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return Params(empty(), path(key));
    if (!it->is_object()) throw UsageError(path(key), "expected an object");
    return Params(*it, path(key));
  }

  void finish() const {
    for (const auto& [k, v] : doc_.items()) {
      if (!used_.count(k)) throw UsageError(path(k.c_str()), "unknown parameter");
    }
  }

 private:
  static const Json& empty() {
    static const Json e = Json::object();
    return e;
  }
  static std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }
  std::string path(const char* key) const { return prefix_ + "." + key; }

  const Json& doc_;
  std::string prefix_;
  std::set<std::string> used_;
};

using Rows = std::vector<ReportRow>;

/// Runs `block`, stamping every row it produced with the block's wall time.
void timed(Rows& rows, const std::function<void(Rows&)>& block) {
  const auto t0 = std::chrono::steady_clock::now();
  Rows local;
  block(local);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : local) {
    r.ms = ms;
    rows.push_back(std::move(r));
  }
}

std::string tag(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

// ---------------------------------------------------------------------------

struct NormsParams {
  int restarts, lemma_samples, swap_pairs;
};

NormsParams norms_params(Params p) {
  NormsParams n{p.integer("restarts", 20, 1, 1000), p.integer("lemma_samples", 200, 1, 100000),
                p.integer("swap_pairs", 20, 1, 10000)};
  p.finish();
  return n;
}

void run_norms(const NormsParams& p, std::uint64_t seed, Rows& rows) {
  const std::string e = "norms";
  timed(rows, [&](Rows& out) {
    for (int n : {1, 2}) {
      const auto avg = key_average(pauli_keyed_family(n));
      const double dev = (avg.choi() - depolarizing(n, n).choi()).cwiseAbs().maxCoeff();
      out.push_back(at_most(e, "pauli-twirl-average-" + std::to_string(n) + "q", dev, 1e-12));
    }
  });
  timed(rows, [&](Rows& out) {
    const std::uint64_t s = derive_seed(seed, 1);
    int violations = 0;
    for (int i = 0; i < p.lemma_samples; ++i) {
      const Index d = Index{2} << (i % 3);
      const auto x = random_effect(d, derive_seed(s, 3 * i));
      const auto rho = random_density(d, d, derive_seed(s, 3 * i + 1));
      const auto sigma = random_density(d, d, derive_seed(s, 3 * i + 2));
      if (x.expectation(rho) > x.expectation(sigma) + trace_norm(rho.matrix() - sigma.matrix()) + 1e-9) ++violations;
    }
    out.push_back(at_most(e, "effect-gap-bound-violations", violations, 0));
  });
  timed(rows, [&](Rows& out) {
    const std::uint64_t s = derive_seed(seed, 2);
    double pure_dev = 0.0, mixed_dev = 0.0;
    std::uint64_t k = 0;
    for (Index d : {2, 4}) {
      const Matrix proj = build_swap_test(d).projector();
      for (int i = 0; i < p.swap_pairs; ++i) {
        const auto a = random_pure_state(d, derive_seed(s, k++));
        const auto b = random_pure_state(d, derive_seed(s, k++));
        const Vector ab = tensor(a, b).amplitudes();
        const double got = (ab.adjoint() * proj * ab)(0, 0).real();
        pure_dev = std::max(pure_dev, std::abs(got - 0.5 * (1.0 + std::norm(a.overlap(b)))));
        const auto r = random_density(d, d, derive_seed(s, k++));
        const auto q = random_density(d, d, derive_seed(s, k++));
        const double gm = (proj * tensor(r.matrix(), q.matrix())).trace().real();
        mixed_dev = std::max(mixed_dev, std::abs(gm - 0.5 * (1.0 + (r.matrix() * q.matrix()).trace().real())));
      }
    }
    out.push_back(at_most(e, "swap-test-pure", pure_dev, 1e-9));
    out.push_back(at_most(e, "swap-test-mixed", mixed_dev, 1e-9));
  });
  timed(rows, [&](Rows& out) {
    const std::uint64_t s = derive_seed(seed, 3);
    const auto d1 = diamond_distance(QuantumChannel::identity(1), depolarizing(1, 1), p.restarts, s);
    out.push_back(within(e, "diamond-id-omega-1q", d1.lower_bound, 1.5, 1e-6));
    const auto d2 = diamond_distance(QuantumChannel::identity(2), depolarizing(2, 2), p.restarts, s);
    out.push_back(within(e, "diamond-id-omega-2q", d2.lower_bound, 1.875, 1e-6));
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const auto dx = diamond_distance(QuantumChannel::identity(1), QuantumChannel::unitary(x), p.restarts, s);
    out.push_back(within(e, "diamond-id-x", dx.lower_bound, 2.0, 1e-6));
  });
  timed(rows, [&](Rows& out) {
    DiamondOptions opt;
    opt.restarts = p.restarts;
    opt.seed = derive_seed(seed, 4);
    const auto otp = check_eps_private(pauli_keyed_family(1), pauli_decrypt_family(1), 0.01, opt);
    out.push_back(at_most(e, "otp-private-distance", std::max(otp.decryption_distance, otp.average_distance), 1e-9));
    out.push_back(holds(e, "otp-verdict-consistent", otp.verdict == PrivacyVerdict::ConsistentWithPrivate));
    const auto leak = check_eps_private(key_ignoring_family(1, 2), key_ignoring_family(1, 2), 0.1, opt);
    out.push_back(at_least(e, "key-ignoring-average-distance", leak.average_distance, 1.5 - 1e-6));
    out.push_back(holds(e, "key-ignoring-verdict-violates", leak.verdict == PrivacyVerdict::Violates));
  });
}

// ---------------------------------------------------------------------------

struct ReductionParams {
  double eps;
  std::vector<double> deltas;
  int restarts, samples, p_points;
};

ReductionParams reduction_params(Params p) {
  ReductionParams r{p.number("eps", 0.04, 1e-6, 0.249), p.numbers("deltas", {1.0, 0.5}, 0.0, 1.0, true),
                    p.integer("restarts", 20, 1, 1000), p.integer("samples", 50, 1, 100000),
                    p.integer("p_points", 10, 1, 10000)};
  p.finish();
  return r;
}

void run_reduction(const ReductionParams& p, std::uint64_t seed, Rows& rows) {
  const std::string e = "reduction";
  const double bound = 3.0 * std::sqrt(p.eps);
  timed(rows, [&](Rows& out) {
    double dev = 0.0;
    bool strict = true;
    Vector one(2);
    one << 0.0, 1.0;
    for (int k = 1; k <= p.p_points; ++k) {
      const double prob = static_cast<double>(k) / (p.p_points + 1);
      const auto stage = copy_stage(rotation_verifier(prob), one);
      const Matrix pp = stage.phi_prime * stage.phi_prime.adjoint();
      const double to_zero = trace_norm(pp - stage.copy_zero * stage.copy_zero.adjoint());
      const double to_one = trace_norm(pp - stage.copy_one * stage.copy_one.adjoint());
      const auto closed = copy_distortion_bounds(prob);
      dev = std::max({dev, std::abs(to_zero - closed.no_side), std::abs(to_one - closed.yes_side)});
      strict = strict && to_zero < 3.0 * std::sqrt(prob) && to_one < 3.0 * std::sqrt(1.0 - prob);
    }
    out.push_back(at_most(e, "copy-distortion-closed-form", dev, 1e-9));
    out.push_back(holds(e, "copy-distortion-below-majorant", strict));
  });
  ToyVerifierSpec target;
  target.kind = "target_state";
  ToyVerifierSpec reject;
  reject.kind = "always_reject";
  for (std::size_t i = 0; i < p.deltas.size(); ++i) {
    const double delta = p.deltas[i];
    const std::string suffix = "-delta=" + tag(delta);
    const std::uint64_t s = derive_seed(seed, 10 + i);
    timed(rows, [&](Rows& out) {
      const auto v = rotation_verifier(1.0 - p.eps);
      const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), p.eps, delta);
      const auto cert = certify_yes(inst, v, s);
      out.push_back(at_most(e, "yes-side-closeness" + suffix, cert.measured_bound, bound));
      out.push_back(at_least(e, "subspace-dimension" + suffix, cert.subspace_qubits_achieved,
                             cert.subspace_qubits_required));
      const auto vt = make_toy_verifier(target);
      const auto exact = build_ct_circuit(vt, identity_family(), depolarizing_family(), 0.0, delta);
      out.push_back(at_most(e, "yes-side-exact" + suffix, certify_yes(exact, vt, s).measured_bound, 1e-9));
    });
    timed(rows, [&](Rows& out) {
      const auto vr = make_toy_verifier(reject);
      const auto zero = build_ct_circuit(vr, identity_family(), depolarizing_family(), p.eps, delta);
      const auto cz = certify_no(zero, vr, p.restarts, s, p.samples);
      double worst = 0.0;
      for (const auto& pr : cz.probes) worst = std::max(worst, pr.distance);
      out.push_back(at_most(e, "no-side-exact" + suffix, worst, 1e-9));
      const auto v = rotation_verifier(p.eps);
      const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), p.eps, delta);
      const auto cert = certify_no(inst, v, p.restarts, s, p.samples);
      out.push_back(at_most(e, "no-side-closeness" + suffix, cert.measured_bound, bound + 1e-6));
    });
  }
  timed(rows, [&](Rows& out) {
    const auto rep = wellformedness_check(identity_family(), depolarizing_family(), p.eps, 1.0, 1, p.samples,
                                          derive_seed(seed, 99));
    out.push_back(at_least(e, "families-separated", rep.min_distance, 2.0 * p.eps));
  });
}

// ---------------------------------------------------------------------------

struct ApplicationsParams {
  int restarts, iterations, grid_points;
  double eps;
};

ApplicationsParams applications_params(Params p) {
  ApplicationsParams a{p.integer("restarts", 20, 1, 1000), p.integer("iterations", 200, 1, 100000),
                       p.integer("grid_points", 1000, 10, 1000000), p.number("eps", 0.1, 0.0, 1.0)};
  p.finish();
  return a;
}

/// Minimum output entropy of a qubit channel over a Fibonacci grid on the Bloch sphere.
double bloch_grid_min_entropy(const QuantumChannel& c, int points) {
  double best = 1e300;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < points; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / points;
    const double theta = std::acos(z), phi = golden * i;
    Vector psi(2);
    psi << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
    best = std::min(best, von_neumann_entropy(c.apply(Matrix(psi * psi.adjoint()))));
  }
  return best;
}

void run_applications(const ApplicationsParams& p, std::uint64_t seed, Rows& rows) {
  const std::string e = "applications";
  SearchOptions opt;
  opt.restarts = p.restarts;
  opt.iterations = p.iterations;
  opt.eps = p.eps;
  timed(rows, [&](Rows& out) {
    opt.seed = derive_seed(seed, 1);
    const auto u = QuantumChannel::unitary(random_unitary(2, derive_seed(seed, 2)));
    out.push_back(within(e, "min-entropy-unitary", min_output_entropy(u, opt).statistic, 0.0, 1e-9));
    for (int n : {1, 2}) {
      out.push_back(within(e, "min-entropy-omega-" + std::to_string(n) + "q",
                           min_output_entropy(depolarizing(n, n), opt).statistic, n, 1e-9));
    }
    const auto half = QuantumChannel::identity(1).mix(depolarizing(1, 1), 0.5);
    out.push_back(within(e, "min-entropy-half-depolarizing", min_output_entropy(half, opt).statistic,
                         bloch_grid_min_entropy(half, p.grid_points), 1e-3));
  });
  timed(rows, [&](Rows& out) {
    opt.seed = derive_seed(seed, 3);
    out.push_back(at_most(e, "fixed-point-identity", pure_fixed_point_search(QuantumChannel::identity(1), opt).statistic,
                          1e-9));
    Matrix j = Matrix::Zero(4, 4);
    j(1, 1) = 1.0;  // |0><0| -> |1><1|
    j(2, 2) = 1.0;  // |1><1| -> |0><0|
    out.push_back(at_least(e, "fixed-point-measure-then-x", pure_fixed_point_search(QuantumChannel(1, 1, j), opt).statistic,
                           1.0 - 1e-6));
  });
  timed(rows, [&](Rows& out) {
    opt.seed = derive_seed(seed, 4);
    const auto drop = to_channel(CircuitBuilder(2).trace_out({1}).build());
    out.push_back(at_most(e, "nonisometry-partial-trace", nonisometry_stat(drop, opt).statistic, 0.5 + 1e-9));
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    out.push_back(within(e, "nonidentity-pauli-x", nonidentity_stat(QuantumChannel::unitary(x), opt).statistic, 2.0, 1e-6));
  });
}

// ---------------------------------------------------------------------------

struct ProtocolParams {
  int n, shots;
  double eps, delta;
};

ProtocolParams protocol_params(Params p) {
  ProtocolParams r{p.integer("n", 1, 1, 2), p.integer("shots", 100000, 1, 100000000), p.number("eps", 0.0, 0.0, 0.0624),
                   p.number("delta", 0.5, 1e-3, 1.0)};
  p.finish();
  return r;
}

void run_protocol(const ProtocolParams& p, std::uint64_t seed, Rows& rows) {
  const std::string e = "di-protocol";
  const double dim_k = static_cast<double>(dim_of(p.n));
  const double expected = 0.5 + 0.5 / dim_k;
  double complete = 0.0, sound = 0.0;
  timed(rows, [&](Rows& out) {
    const auto insecure = make_instance(key_ignoring_family(p.n, 2 * p.n), p.eps, 1.0, Provenance::Custom);
    const auto psi = random_pure_state(dim_of(2 * p.n), derive_seed(seed, 1));
    complete = exact_accept_probability(insecure, doubled_proof(psi), "psi⊗psi").probability;
    out.push_back(within(e, "protocol-completeness", complete, 1.0, 1e-9));
  });
  const auto secure = build_secure_instance(p.n, p.eps);
  ProofOptimum best{0.0, PureState::zero(0)};
  timed(rows, [&](Rows& out) {
    best = optimal_proof_accept(secure);
    sound = best.probability;
    out.push_back(within(e, "protocol-soundness-optimal-proof", sound, expected, 1e-9));
  });
  timed(rows, [&](Rows& out) {
    const auto r = run_protocol_sampled(secure, DensityOperator::from_pure(best.proof), static_cast<std::uint64_t>(p.shots),
                                        derive_seed(seed, 2), "optimal");
    ReportRow row{e,    "protocol-soundness-sampled", r.probability, expected, Relation::Within, 0.5 * (r.ci95.hi - r.ci95.lo),
                  r.ci95.lo <= expected && expected <= r.ci95.hi, 0.0};
    out.push_back(row);
    const double pairs = accept_probability_by_key_pairs(secure, DensityOperator::from_pure(best.proof));
    out.push_back(at_most(e, "key-linearity", std::abs(pairs - sound), 1e-12));
  });
  rows.push_back(at_least(e, "protocol-gap", complete - sound, 0.5 - 0.5 / dim_k - 1e-6));
  timed(rows, [&](Rows& out) {
    ToyVerifierSpec target;
    target.kind = "target_state";
    const auto v = make_toy_verifier(target);
    const auto inst = build_insecure_instance(v, p.eps, p.delta);
    const int f = inst.message_qubits() - v.witness_qubits();
    const Vector branch = tensor(tensor(Vector(PureState::zero(inst.message_qubits()).amplitudes()),
                                        Vector(PureState::zero(f).amplitudes())),
                                 max_accept_probability(v).witness.amplitudes());
    const double pc = exact_accept_probability(inst, doubled_proof(PureState(branch))).probability;
    out.push_back(at_least(e, "insecure-reduction-completeness", pc, 1.0 - 2.0 * p.eps - 1e-9));
    out.push_back(at_most(e, "insecure-reduction-accepting-subspace", accepting_subspace_deviation(inst, v, derive_seed(seed, 3)),
                          3.0 * std::sqrt(p.eps) + 1e-9));
  });
}

}  // namespace

std::vector<std::string> experiment_names() { return {"norms", "reduction", "applications", "di-protocol", "full-suite"}; }

std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
  Params params(config.params, "params");
  Rows rows;
  const std::string& e = config.experiment;
  if (e == "norms") {
    run_norms(norms_params(params), config.seed, rows);
  } else if (e == "reduction") {
    run_reduction(reduction_params(params), config.seed, rows);
  } else if (e == "applications") {
    run_applications(applications_params(params), config.seed, rows);
  } else if (e == "di-protocol") {
    run_protocol(protocol_params(params), config.seed, rows);
  } else if (e == "full-suite") {
    // Validate everything before running anything.
    const auto n = norms_params(params.child("norms"));
    const auto r = reduction_params(params.child("reduction"));
    const auto a = applications_params(params.child("applications"));
    const auto d = protocol_params(params.child("di-protocol"));
    params.finish();
    run_norms(n, derive_seed(config.seed, 0), rows);
    run_reduction(r, derive_seed(config.seed, 1), rows);
    run_applications(a, derive_seed(config.seed, 2), rows);
    run_protocol(d, derive_seed(config.seed, 3), rows);
  } else {
    throw UsageError("experiment", "unknown experiment '" + e + "'");
  }
  return rows;
}

}  // namespace qct::harness

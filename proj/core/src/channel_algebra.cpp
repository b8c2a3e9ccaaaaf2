#include "qct/channel_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace qct {

// ---------------------------------------------------------------------------
// KeyedChannelFamily

KeyedChannelFamily::KeyedChannelFamily(int key_bits, MixedStateCircuit template_circuit)
    : key_bits_(key_bits), template_(std::move(template_circuit)) {
  if (key_bits < 0 || key_bits > 62) throw DomainError("key_bits must lie in [0, 62]");
  if (template_.placeholder_key_bits() > key_bits) {
    throw DomainError("template references key bit " + std::to_string(template_.placeholder_key_bits() - 1) +
                      " but the family has " + std::to_string(key_bits) + " key bits");
  }
}

MixedStateCircuit KeyedChannelFamily::circuit(std::uint64_t key) const {
  if (key >= key_count()) {
    throw DomainError("key " + std::to_string(key) + " outside [0, 2^" + std::to_string(key_bits_) + ")");
  }
  return template_.with_key(key);
}

QuantumChannel KeyedChannelFamily::channel(std::uint64_t key) const { return to_channel(circuit(key)); }

OrderedJson family_to_json(const KeyedChannelFamily& f) {
  OrderedJson j;
  j["key_bits"] = f.key_bits();
  j["template"] = circuit_to_json(f.template_circuit());
  return j;
}

KeyedChannelFamily family_from_json(const Json& doc, const std::string& path) {
  const std::string where = path.empty() ? "family" : path;
  if (!doc.is_object()) throw ParseError(where, "expected an object");
  auto bits = doc.find("key_bits");
  if (bits == doc.end() || !bits->is_number_integer()) {
    throw ParseError(path.empty() ? "key_bits" : path + ".key_bits", "expected an integer");
  }
  auto tmpl = doc.find("template");
  if (tmpl == doc.end()) throw ParseError(path.empty() ? "template" : path + ".template", "missing required field");
  auto circuit = circuit_from_json(*tmpl, path.empty() ? "template" : path + ".template");
  try {
    return KeyedChannelFamily(bits->get<int>(), std::move(circuit));
  } catch (const DomainError& e) {
    throw ParseError(where, e.what());
  }
}

// ---------------------------------------------------------------------------
// built-in channels

QuantumChannel depolarizing(int in_qubits, int out_qubits) {
  if (out_qubits < in_qubits) throw DomainError("depolarizing channel needs out_qubits >= in_qubits");
  require_capacity(in_qubits + out_qubits, "depolarizing channel");
  return QuantumChannel::depolarizing(in_qubits, out_qubits);
}

MixedStateCircuit depolarizing_circuit(int in_qubits, int out_qubits) {
  if (out_qubits < in_qubits) throw DomainError("depolarizing channel needs out_qubits >= in_qubits");
  CircuitBuilder b(in_qubits);
  if (out_qubits > in_qubits) b.ancilla(out_qubits - in_qubits);
  int keys = 0;
  b.ancilla(2 * out_qubits, &keys);
  Matrix x(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  std::vector<int> key_wires;
  for (int i = 0; i < out_qubits; ++i) {
    const int xk = keys + 2 * i, zk = keys + 2 * i + 1;
    b.h(xk).h(zk);
    b.controlled(zk, z, {i});
    b.controlled(xk, x, {i});
    key_wires.push_back(xk);
    key_wires.push_back(zk);
  }
  b.trace_out(key_wires);
  return b.build();
}

namespace {

void check_pauli_key(int qubits, std::uint64_t key) {
  if (qubits < 0 || 2 * qubits > 62) throw DomainError("pauli_keyed: unsupported qubit count");
  if (key >= (std::uint64_t{1} << (2 * qubits))) {
    throw DomainError("key " + std::to_string(key) + " outside [0, 4^" + std::to_string(qubits) + ")");
  }
}

MixedStateCircuit pauli_template(int qubits, bool inverse) {
  CircuitBuilder b(qubits);
  for (int i = 0; i < qubits; ++i) b.keyed_pauli(i, 2 * i, 2 * i + 1, -1, inverse);
  return b.build();
}

}  // namespace

MixedStateCircuit pauli_keyed(int qubits, std::uint64_t key) {
  check_pauli_key(qubits, key);
  return pauli_template(qubits, false).with_key(key);
}

MixedStateCircuit pauli_decrypt(int qubits, std::uint64_t key) {
  check_pauli_key(qubits, key);
  return pauli_template(qubits, true).with_key(key);
}

KeyedChannelFamily pauli_keyed_family(int qubits) {
  return KeyedChannelFamily(2 * qubits, pauli_template(qubits, false));
}

KeyedChannelFamily pauli_decrypt_family(int qubits) {
  return KeyedChannelFamily(2 * qubits, pauli_template(qubits, true));
}

KeyedChannelFamily key_ignoring_family(int qubits, int key_bits) {
  return KeyedChannelFamily(key_bits, CircuitBuilder(qubits).build());
}

QuantumChannel key_average(const KeyedChannelFamily& f) {
  if (f.key_bits() > kMaxEnumeratedKeyBits) {
    throw BudgetError("key average over 2^" + std::to_string(f.key_bits()) +
                      " keys exceeds the enumeration budget of 2^" + std::to_string(kMaxEnumeratedKeyBits) +
                      "; use the sampled protocol mode instead");
  }
  const Index d = dim_of(f.in_qubits() + f.out_qubits());
  Matrix sum = Matrix::Zero(d, d);
  for (std::uint64_t k = 0; k < f.key_count(); ++k) sum += f.channel(k).choi();
  sum /= static_cast<double>(f.key_count());
  return QuantumChannel(f.in_qubits(), f.out_qubits(), std::move(sum));
}

// ---------------------------------------------------------------------------
// distinguishability

double output_distance(const QuantumChannel& a, const QuantumChannel& b, const Matrix& rho, int reference_qubits) {
  if (a.in_qubits() != b.in_qubits() || a.out_qubits() != b.out_qubits()) {
    throw DimensionError("channels have different shapes");
  }
  return trace_norm(a.apply(rho, reference_qubits) - b.apply(rho, reference_qubits));
}

namespace {

struct AscentResult {
  double value;
  Vector psi;
  int iterations;
};

AscentResult ascend(const Matrix& diff, int in_q, int out_q, int ref_q, Vector psi, const DiamondOptions& opt) {
  double best = -1.0;
  Vector best_psi = psi;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Matrix delta = apply_choi(diff, in_q, out_q, psi * psi.adjoint(), ref_q);
    const Matrix herm = 0.5 * (delta + delta.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    const double value = es.eigenvalues().cwiseAbs().sum();
    const bool improved = value > best + opt.tolerance;
    if (value > best) {
      best = value;
      best_psi = psi;
    }
    if (!improved && it > 0) break;
    // Sign observable achieving the trace norm of delta, pulled back to the input.
    Eigen::VectorXd signs = es.eigenvalues().unaryExpr([](double l) { return l < 0.0 ? -1.0 : 1.0; });
    const Matrix m = es.eigenvectors() * signs.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    const Matrix g = apply_choi_adjoint(diff, in_q, out_q, m, ref_q);
    Eigen::SelfAdjointEigenSolver<Matrix> top(0.5 * (g + g.adjoint()));
    psi = top.eigenvectors().col(top.eigenvectors().cols() - 1);
  }
  return {best, best_psi, it};
}

}  // namespace

DiamondEstimate diamond_distance(const QuantumChannel& a, const QuantumChannel& b, const DiamondOptions& options) {
  if (a.in_qubits() != b.in_qubits() || a.out_qubits() != b.out_qubits()) {
    throw DimensionError("diamond_distance: channels have different shapes");
  }
  if (options.restarts < 1) throw DomainError("diamond_distance: restarts must be >= 1");
  const int in_q = a.in_qubits(), out_q = a.out_qubits();
  const int ref_q = options.reference_qubits < 0 ? in_q : options.reference_qubits;
  require_capacity(std::max(in_q, out_q) + ref_q, "diamond_distance");
  const Matrix diff = a.choi() - b.choi();

  DiamondEstimate result;
  result.lower_bound = -1.0;
  for (int r = 0; r < options.restarts; ++r) {
    Vector start = random_pure_state(dim_of(in_q + ref_q), derive_seed(options.seed, static_cast<std::uint64_t>(r)))
                       .amplitudes();
    auto run = ascend(diff, in_q, out_q, ref_q, std::move(start), options);
    result.iterations += run.iterations;
    if (run.value > result.lower_bound) {
      result.lower_bound = run.value;
      run.psi /= run.psi.norm();
      result.witness = PureState(std::move(run.psi));
    }
  }
  return result;
}

DiamondEstimate diamond_distance(const QuantumChannel& a, const QuantumChannel& b, int restarts, std::uint64_t seed) {
  DiamondOptions opt;
  opt.restarts = restarts;
  opt.seed = seed;
  return diamond_distance(a, b, opt);
}

std::string_view to_string(PrivacyVerdict v) {
  return v == PrivacyVerdict::ConsistentWithPrivate ? "CONSISTENT-WITH-EPS-PRIVATE" : "VIOLATES";
}

PrivacyReport check_eps_private(const KeyedChannelFamily& f, const KeyedChannelFamily& decryptor, double eps,
                                const DiamondOptions& options) {
  if (!(eps >= 0.0)) throw DomainError("eps must be non-negative");
  if (decryptor.in_qubits() != f.out_qubits() || decryptor.out_qubits() != f.in_qubits()) {
    throw DimensionError("decryptor does not invert the family's input/output shape");
  }
  if (decryptor.key_bits() != f.key_bits()) throw DimensionError("decryptor and family use different key lengths");
  if (f.key_bits() > kMaxEnumeratedKeyBits) {
    throw BudgetError("privacy check enumerates 2^" + std::to_string(f.key_bits()) + " keys, budget is 2^" +
                      std::to_string(kMaxEnumeratedKeyBits));
  }
  PrivacyReport report;
  report.eps = eps;
  const auto id = QuantumChannel::identity(f.in_qubits());
  DiamondOptions trace_opt = options;
  trace_opt.reference_qubits = 0;
  for (std::uint64_t k = 0; k < f.key_count(); ++k) {
    const auto round_trip = f.channel(k).then(decryptor.channel(k));
    DiamondOptions opt = options;
    opt.seed = derive_seed(options.seed, k);
    trace_opt.seed = opt.seed;
    const double d = diamond_distance(round_trip, id, opt).lower_bound;
    if (d > report.decryption_distance || k == 0) {
      report.decryption_distance = d;
      report.worst_key = k;
    }
    report.decryption_distance_trace =
        std::max(report.decryption_distance_trace, diamond_distance(round_trip, id, trace_opt).lower_bound);
  }
  const auto avg = key_average(f);
  const auto omega = depolarizing(f.in_qubits(), f.out_qubits());
  report.average_distance = diamond_distance(avg, omega, options).lower_bound;
  trace_opt.seed = options.seed;
  report.average_distance_trace = diamond_distance(avg, omega, trace_opt).lower_bound;
  report.verdict = (report.decryption_distance <= eps && report.average_distance <= eps)
                       ? PrivacyVerdict::ConsistentWithPrivate
                       : PrivacyVerdict::Violates;
  return report;
}

}  // namespace qct

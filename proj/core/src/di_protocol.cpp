#include "qct/di_protocol.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_map>

#include "qct/ct_reduction.hpp"
#include "qct/kernels.hpp"

namespace qct {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::SecureOtp:
      return "SECURE_OTP";
    case Provenance::InsecureFromVerifier:
      return "INSECURE_FROM_VERIFIER";
    case Provenance::Custom:
      return "CUSTOM";
  }
  return "?";
}

std::string_view to_string(ProtocolMode m) { return m == ProtocolMode::Exact ? "EXACT" : "SAMPLED"; }

DIInstance make_instance(KeyedChannelFamily family, double eps, double delta, Provenance provenance) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("eps must lie in [0, 1)");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  if (family.out_qubits() < family.in_qubits()) {
    throw DomainError("encryption family must not shrink its input (dim_out >= dim_in)");
  }
  return DIInstance{std::move(family), eps, delta, provenance};
}

DIInstance build_secure_instance(int qubits, double eps) {
  if (qubits < 1) throw DomainError("secure instance needs at least one message qubit");
  require_capacity(2 * qubits, "secure instance");
  return make_instance(pauli_keyed_family(qubits), eps, 1.0, Provenance::SecureOtp);
}

DIInstance build_insecure_instance(const VerifierCircuit& v, double eps, double delta) {
  const auto opt = max_accept_probability(v);
  if (opt.probability < 1.0 - eps - 1e-12) {
    throw WrongSideError("verifier's best acceptance " + std::to_string(opt.probability) +
                         " is below 1 - eps; the reduction would produce a secure instance "
                         "(certify it with check_eps_private instead)");
  }
  auto tmpl = build_ct_keyed_template(v, identity_family(), delta);
  const int n = tmpl.input_qubits();
  return make_instance(KeyedChannelFamily(2 * n, std::move(tmpl)), eps, delta, Provenance::InsecureFromVerifier);
}

OrderedJson instance_to_json(const DIInstance& inst) {
  OrderedJson j = family_to_json(inst.family);
  j["eps"] = inst.eps;
  j["delta"] = inst.delta;
  j["provenance"] = std::string(to_string(inst.provenance));
  return j;
}

DIInstance instance_from_json(const Json& doc, const std::string& path) {
  auto fam = family_from_json(doc, path);
  auto field = [&](const char* name) { return path.empty() ? std::string(name) : path + "." + name; };
  auto number = [&](const char* name, double fallback) {
    auto it = doc.find(name);
    if (it == doc.end()) return fallback;
    if (!it->is_number()) throw ParseError(field(name), "expected a number");
    return it->get<double>();
  };
  Provenance prov = Provenance::Custom;
  if (auto it = doc.find("provenance"); it != doc.end()) {
    const std::string s = it->is_string() ? it->get<std::string>() : "";
    if (s == "SECURE_OTP") {
      prov = Provenance::SecureOtp;
    } else if (s == "INSECURE_FROM_VERIFIER") {
      prov = Provenance::InsecureFromVerifier;
    } else if (s != "CUSTOM") {
      throw ParseError(field("provenance"), "expected SECURE_OTP, INSECURE_FROM_VERIFIER or CUSTOM");
    }
  }
  try {
    return make_instance(std::move(fam), number("eps", 0.0), number("delta", 1.0), prov);
  } catch (const DomainError& e) {
    throw ParseError(path.empty() ? "instance" : path, e.what());
  }
}

// ---------------------------------------------------------------------------
// swap test

SwapTest::SwapTest(Index branch_dim) : d_(branch_dim) {
  if (branch_dim < 1) throw DomainError("swap test needs a positive branch dimension");
  require_capacity(2 * qubit_count(branch_dim), "swap test");
}

Matrix SwapTest::projector() const {
  const Index dd = d_ * d_;
  return 0.5 * (Matrix::Identity(dd, dd) + kernels::swap_operator(d_));
}

double SwapTest::symmetric_probability(const Matrix& rho) const {
  if (rho.rows() != d_ * d_ || rho.cols() != d_ * d_) throw DimensionError("swap test input has the wrong dimension");
  Complex tr_w(0.0, 0.0);
  for (Index hi = 0; hi < d_; ++hi) {
    for (Index lo = 0; lo < d_; ++lo) tr_w += rho(lo * d_ + hi, hi * d_ + lo);
  }
  return 0.5 * (rho.trace().real() + tr_w.real());
}

SwapTest build_swap_test(Index branch_dim) { return SwapTest(branch_dim); }

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// ---------------------------------------------------------------------------
// branch application

namespace {

std::vector<int> range(int from, int count) {
  std::vector<int> v(static_cast<std::size_t>(count));
  std::iota(v.begin(), v.end(), from);
  return v;
}

std::vector<int> concat(std::initializer_list<std::vector<int>> parts) {
  std::vector<int> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void check_proof(const Matrix& proof, int n) {
  if (proof.rows() != dim_of(4 * n)) {
    throw DimensionError("proof must live on (H ⊗ R)^2 with dim R = dim H (" + std::to_string(4 * n) +
                         " qubits); larger references do not change the optimum");
  }
}

Matrix pull_back(const QuantumChannel& e1, const QuantumChannel& e2, const Matrix& obs, int n) {
  const int m = e1.out_qubits();
  // [K1, R1, K2, R2] -> [K2, R2, K1, R1]
  Matrix x = kernels::permute_qubits(obs, concat({range(m + n, m), range(2 * m + n, n), range(0, m), range(m, n)}));
  x = e2.apply_adjoint(x, m + 2 * n);
  // [H2, R2, K1, R1] -> [K1, R1, H2, R2]
  x = kernels::permute_qubits(x, concat({range(2 * n, m), range(2 * n + m, n), range(0, n), range(n, n)}));
  return e1.apply_adjoint(x, 3 * n);
}

}  // namespace

Matrix apply_branches(const QuantumChannel& e1, const QuantumChannel& e2, const Matrix& proof, int n) {
  check_proof(proof, n);
  if (e1.in_qubits() != n || e2.in_qubits() != n || e1.out_qubits() != e2.out_qubits()) {
    throw DimensionError("branch channels do not match the message register");
  }
  const int m = e1.out_qubits();
  Matrix x = e1.apply(proof, 3 * n);
  // [K1, R1, H2, R2] -> [H2, R2, K1, R1]
  x = kernels::permute_qubits(x, concat({range(m + n, n), range(m + 2 * n, n), range(0, m), range(m, n)}));
  x = e2.apply(x, 2 * n + m);
  // [K2, R2, K1, R1] -> [K1, R1, K2, R2]
  return kernels::permute_qubits(x, concat({range(m + n, m), range(2 * m + n, n), range(0, m), range(m, n)}));
}

namespace {

double branch_accept(const QuantumChannel& e1, const QuantumChannel& e2, const Matrix& proof, int n) {
  const Matrix out = apply_branches(e1, e2, proof, n);
  return SwapTest(dim_of(e1.out_qubits() + n)).symmetric_probability(out);
}

QuantumChannel averaged(const DIInstance& inst) {
  try {
    return key_average(inst.family);
  } catch (const BudgetError& e) {
    throw BudgetError(std::string(e.what()) + " (run the protocol in sampled mode)");
  }
}

}  // namespace

ProtocolResult exact_accept_probability(const DIInstance& inst, const DensityOperator& proof, std::string proof_label) {
  const int n = inst.message_qubits();
  check_proof(proof.matrix(), n);
  const auto avg = averaged(inst);
  ProtocolResult r;
  r.mode = ProtocolMode::Exact;
  r.probability = branch_accept(avg, avg, proof.matrix(), n);
  r.proof = std::move(proof_label);
  return r;
}

double accept_probability_by_key_pairs(const DIInstance& inst, const DensityOperator& proof) {
  const int n = inst.message_qubits();
  check_proof(proof.matrix(), n);
  if (inst.key_bits() > kMaxEnumeratedKeyBits / 2) {
    throw BudgetError("enumerating key pairs over 2^" + std::to_string(2 * inst.key_bits()) +
                      " combinations exceeds the budget; use the key-averaged or sampled path");
  }
  std::vector<QuantumChannel> ch;
  for (std::uint64_t k = 0; k < inst.family.key_count(); ++k) ch.push_back(inst.family.channel(k));
  double sum = 0.0;
  for (const auto& a : ch) {
    for (const auto& b : ch) sum += branch_accept(a, b, proof.matrix(), n);
  }
  return sum / static_cast<double>(ch.size() * ch.size());
}

ProofOptimum optimal_proof_accept(const DIInstance& inst) {
  const int n = inst.message_qubits();
  const int m = inst.family.out_qubits();
  require_capacity(2 * (m + n), "optimal proof search");
  const auto avg = averaged(inst);
  const Matrix g = pull_back(avg, avg, SwapTest(dim_of(m + n)).projector(), n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.adjoint()));
  const Index top = es.eigenvalues().size() - 1;
  Vector v = es.eigenvectors().col(top);
  v /= v.norm();
  return {es.eigenvalues()(top), PureState(std::move(v))};
}

ProtocolResult run_protocol_sampled(const DIInstance& inst, const DensityOperator& proof, std::uint64_t shots,
                                    std::uint64_t seed, std::string proof_label) {
  if (shots < 1) throw DomainError("shots must be >= 1");
  const int n = inst.message_qubits();
  check_proof(proof.matrix(), n);
  const std::uint64_t mask = inst.family.key_count() - 1;
  std::unordered_map<std::uint64_t, QuantumChannel> channels;
  std::unordered_map<std::uint64_t, double> pair_p;
  auto channel = [&](std::uint64_t k) -> const QuantumChannel& {
    auto it = channels.find(k);
    if (it == channels.end()) it = channels.emplace(k, inst.family.channel(k)).first;
    return it->second;
  };
  std::mt19937_64 rng(seed);
  std::uint64_t accepts = 0;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const std::uint64_t k1 = rng() & mask;
    const std::uint64_t k2 = rng() & mask;
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const std::uint64_t pair = (k1 << 32) ^ k2;
    auto it = pair_p.find(pair);
    if (it == pair_p.end()) it = pair_p.emplace(pair, branch_accept(channel(k1), channel(k2), proof.matrix(), n)).first;
    if (u < it->second) ++accepts;
  }
  ProtocolResult r;
  r.mode = ProtocolMode::Sampled;
  r.shots = shots;
  r.accepts = accepts;
  r.probability = static_cast<double>(accepts) / static_cast<double>(shots);
  r.ci95 = wilson_interval(accepts, shots);
  r.proof = std::move(proof_label);
  r.seed = seed;
  return r;
}

DensityOperator doubled_proof(const PureState& branch_state) {
  return DensityOperator::from_pure(tensor(branch_state, branch_state));
}

double accepting_subspace_deviation(const DIInstance& inst, const VerifierCircuit& v, std::uint64_t seed) {
  const int n = inst.message_qubits();
  const int h = v.witness_qubits();
  const int f = n - h;
  if (f < 0) throw DimensionError("verifier witness register is wider than the instance input");
  if (inst.key_bits() > kMaxEnumeratedKeyBits) throw BudgetError("too many keys to probe individually");
  const Vector gamma = max_accept_probability(v).witness.amplitudes();
  const Index df = dim_of(f);
  std::vector<std::pair<Vector, int>> probes;
  for (Index k = 0; k < std::min<Index>(df, 4); ++k) probes.emplace_back(tensor(Vector(PureState::basis(df, k).amplitudes()), gamma), 0);
  const int r = std::max(f, 1);
  probes.emplace_back(tensor(Vector(random_pure_state(dim_of(r + f), derive_seed(seed, 0)).amplitudes()), gamma), r);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < inst.family.key_count(); ++k) {
    const auto e = inst.family.channel(k);
    for (const auto& [psi, ref] : probes) {
      const Matrix rho = psi * psi.adjoint();
      worst = std::max(worst, trace_norm(e.apply(rho, ref) - rho));
    }
  }
  return worst;
}

OrderedJson protocol_report_json(const DIInstance& inst, const ProtocolResult& r) {
  OrderedJson j;
  j["instance"] = {{"message_qubits", inst.message_qubits()},
                   {"key_bits", inst.key_bits()},
                   {"eps", inst.eps},
                   {"delta", inst.delta},
                   {"provenance", std::string(to_string(inst.provenance))}};
  j["mode"] = std::string(to_string(r.mode));
  j["proof_spec"] = r.proof;
  if (r.mode == ProtocolMode::Exact) {
    j["p"] = r.probability;
  } else {
    j["sampled"] = {{"shots", r.shots}, {"accepts", r.accepts}, {"freq", r.probability}, {"ci95", {r.ci95.lo, r.ci95.hi}}};
  }
  j["seed"] = r.seed;
  return j;
}

}  // namespace qct

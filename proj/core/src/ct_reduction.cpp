#include "qct/ct_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qct/kernels.hpp"

namespace qct {

// ---------------------------------------------------------------------------
// family registry

MixedStateCircuit CircuitFamily::at(int width) const {
  if (!generate) throw DomainError("circuit family '" + name + "' has no generator");
  return generate(width);
}

CircuitFamily identity_family() {
  return {"identity", Json::object(), [](int n) { return CircuitBuilder(n).build(); }};
}

CircuitFamily depolarizing_family() {
  return {"depolarizing", Json::object(), [](int n) { return depolarizing_circuit(n, n); }};
}

CircuitFamily pauli_x_first_family() {
  return {"pauli_x_first", Json::object(), [](int n) {
            if (n < 1) throw DomainError("pauli_x_first needs at least one qubit");
            return CircuitBuilder(n).x(0).build();
          }};
}

CircuitFamily pauli_keyed_member(std::uint64_t key) {
  return {"pauli_keyed", Json{{"key", key}}, [key](int n) { return pauli_keyed(n, key); }};
}

CircuitFamily family_by_name(const std::string& name, const Json& params) {
  if (name == "identity") return identity_family();
  if (name == "depolarizing") return depolarizing_family();
  if (name == "pauli_x_first") return pauli_x_first_family();
  if (name == "pauli_keyed") {
    auto it = params.find("key");
    if (it == params.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0) {
      throw DomainError("family 'pauli_keyed' needs a non-negative integer param 'key'");
    }
    return pauli_keyed_member(it->get<std::uint64_t>());
  }
  throw DomainError("unknown circuit family '" + name + "'");
}

std::vector<std::string> family_names() { return {"identity", "depolarizing", "pauli_x_first", "pauli_keyed"}; }

int dummy_qubits(int witness_qubits, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  if (witness_qubits < 1) throw DomainError("witness register needs at least one qubit");
  const double f = static_cast<double>(witness_qubits) * (1.0 - delta) / delta;
  if (f > 1e6) throw CapacityError("dummy register of " + std::to_string(f) + " qubits", 1000000, max_qubits());
  // guard against 0.99999999 style rounding before the ceiling
  return static_cast<int>(std::ceil(f - 1e-12));
}

// ---------------------------------------------------------------------------
// construction

namespace {

struct Branch {
  Matrix unitary;  // on the n + a working wires, kept outputs on the low wires
  int outputs;
};

Branch prepare_branch(const CircuitFamily& fam, int n, int a) {
  auto c = canonicalize(fam.at(n));
  if (c.input_qubits != n) throw DimensionError("family '" + fam.name + "' changed its input width");
  if (c.ancilla_qubits < a) c = padded(c, a - c.ancilla_qubits);
  std::vector<int> perm;
  for (int w = 0; w < c.total_qubits(); ++w) {
    if (!std::binary_search(c.traced_wires.begin(), c.traced_wires.end(), w)) perm.push_back(w);
  }
  perm.insert(perm.end(), c.traced_wires.begin(), c.traced_wires.end());
  Matrix u = c.unitary;
  bool moved = false;
  for (int q = 0; q < static_cast<int>(perm.size()); ++q) moved = moved || perm[q] != q;
  if (moved) {
    for (Index j = 0; j < u.cols(); ++j) u.col(j) = kernels::permute_qubits(Vector(c.unitary.col(j)), perm);
  }
  return {std::move(u), c.output_qubits};
}

int branch_ancillas(const CircuitFamily& fam, int n) { return canonicalize(fam.at(n)).ancilla_qubits; }

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("eps must lie in [0, 1)");
}

struct Skeleton {
  int h, f, n, a, copy;
  std::vector<int> v_wires;
  int v_out;
};

Skeleton skeleton(const VerifierCircuit& v, double delta, int branch_ancilla) {
  Skeleton s;
  s.h = v.witness_qubits();
  s.f = dummy_qubits(s.h, delta);
  s.n = s.h + s.f;
  s.a = std::max(v.ancilla_qubits(), branch_ancilla);
  s.copy = s.n + s.a;
  require_capacity(s.n + s.a + 1, "circuit-testing instance (h + f + a + 1 qubits)");
  for (int j = 0; j < s.h; ++j) s.v_wires.push_back(j);
  for (int j = 0; j < v.ancilla_qubits(); ++j) s.v_wires.push_back(s.n + j);
  const int o = v.output_qubit();
  s.v_out = o < s.h ? o : s.n + (o - s.h);
  return s;
}

RegisterLayout input_layout(const Skeleton& s) {
  std::vector<RegisterLayout::Register> regs;
  if (s.f > 0) regs.push_back({"F", s.f});
  regs.push_back({"H", s.h});
  return RegisterLayout(std::move(regs));
}

// V; copy; V^dagger; (caller adds the branches); closes with the trace.
CircuitBuilder open_instance(const VerifierCircuit& v, const Skeleton& s) {
  CircuitBuilder b(s.n);
  b.ancilla(s.a + 1);
  b.unitary(v.unitary(), s.v_wires);
  b.cnot(s.v_out, s.copy);
  b.unitary(v.unitary().adjoint(), s.v_wires);
  return b;
}

std::vector<int> working_wires(const Skeleton& s) {
  std::vector<int> w(static_cast<std::size_t>(s.n + s.a));
  std::iota(w.begin(), w.end(), 0);
  return w;
}

std::vector<int> final_trace(const Skeleton& s, int outputs) {
  std::vector<int> t;
  for (int w = outputs; w < s.n + s.a; ++w) t.push_back(w);
  t.push_back(s.copy);
  return t;
}

}  // namespace

CTInstance build_ct_circuit(const VerifierCircuit& v, const CircuitFamily& c0, const CircuitFamily& c1, double eps,
                            double delta) {
  check_eps(eps);
  const int h = v.witness_qubits();
  const int n = h + dummy_qubits(h, delta);
  require_capacity(n, "circuit-testing input register");
  const Skeleton s = skeleton(v, delta, std::max(branch_ancillas(c0, n), branch_ancillas(c1, n)));
  const Branch b0 = prepare_branch(c0, n, s.a);
  const Branch b1 = prepare_branch(c1, n, s.a);
  if (b0.outputs != b1.outputs) {
    throw DimensionError("families '" + c0.name + "' and '" + c1.name + "' have different output widths at " +
                         std::to_string(n) + " qubits");
  }
  const auto work = working_wires(s);
  auto b = open_instance(v, s);
  b.controlled(s.copy, b0.unitary, work);
  b.x(s.copy);
  b.controlled(s.copy, b1.unitary, work);
  b.x(s.copy);
  const auto traced = final_trace(s, b0.outputs);
  b.trace_out(traced);

  CTInstance inst{b.build(input_layout(s)), c0, c1, eps, delta, s.h, s.f, s.a, RegisterLayout{}, traced};
  std::vector<RegisterLayout::Register> regs{{"copy", 1}};
  if (s.a > 0) regs.push_back({"A", s.a});
  if (s.f > 0) regs.push_back({"F", s.f});
  regs.push_back({"H", s.h});
  inst.layout = RegisterLayout(std::move(regs));
  return inst;
}

MixedStateCircuit build_ct_keyed_template(const VerifierCircuit& v, const CircuitFamily& c0, double delta) {
  const int h = v.witness_qubits();
  const int n = h + dummy_qubits(h, delta);
  require_capacity(n, "circuit-testing input register");
  const Skeleton s = skeleton(v, delta, branch_ancillas(c0, n));
  const Branch b0 = prepare_branch(c0, n, s.a);
  if (b0.outputs != n) throw DimensionError("keyed template needs a width-preserving C0");
  auto b = open_instance(v, s);
  b.controlled(s.copy, b0.unitary, working_wires(s));
  b.x(s.copy);
  for (int i = 0; i < n; ++i) b.keyed_pauli(i, 2 * i, 2 * i + 1, s.copy);
  b.x(s.copy);
  b.trace_out(final_trace(s, n));
  return b.build(input_layout(s));
}

// ---------------------------------------------------------------------------
// serialization

namespace {

OrderedJson family_ref(const CircuitFamily& f) {
  OrderedJson j;
  j["name"] = f.name;
  j["params"] = OrderedJson::parse(f.params.dump());
  return j;
}

CircuitFamily family_ref_from_json(const Json& doc, const std::string& path) {
  if (!doc.is_object()) throw ParseError(path, "expected an object");
  auto name = doc.find("name");
  if (name == doc.end() || !name->is_string()) throw ParseError(path + ".name", "expected a string");
  const Json params = doc.contains("params") ? doc.at("params") : Json::object();
  try {
    return family_by_name(name->get<std::string>(), params);
  } catch (const DomainError& e) {
    throw ParseError(path, e.what());
  }
}

std::string sub(const std::string& path, const char* field) { return path.empty() ? field : path + "." + field; }

const Json& need(const Json& doc, const std::string& path, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw ParseError(sub(path, field), "missing required field");
  return *it;
}

double need_number(const Json& doc, const std::string& path, const char* field) {
  const Json& v = need(doc, path, field);
  if (!v.is_number()) throw ParseError(sub(path, field), "expected a number");
  return v.get<double>();
}

int need_int(const Json& doc, const std::string& path, const char* field) {
  const Json& v = need(doc, path, field);
  if (!v.is_number_integer()) throw ParseError(sub(path, field), "expected an integer");
  return v.get<int>();
}

}  // namespace

OrderedJson ct_instance_to_json(const CTInstance& inst) {
  OrderedJson j;
  j["circuit"] = circuit_to_json(inst.circuit);
  j["c0"] = family_ref(inst.c0);
  j["c1"] = family_ref(inst.c1);
  j["eps"] = inst.eps;
  j["delta"] = inst.delta;
  j["witness_qubits"] = inst.witness_qubits;
  j["dummy_qubits"] = inst.dummy_qubits;
  j["ancilla_qubits"] = inst.ancilla_qubits;
  OrderedJson regs = OrderedJson::array();
  for (const auto& r : inst.layout.registers()) regs.push_back({{"name", r.name}, {"qubits", r.qubits}});
  j["layout"] = std::move(regs);
  j["traced_wires"] = inst.traced_wires;
  return j;
}

CTInstance ct_instance_from_json(const Json& doc, const std::string& path) {
  if (!doc.is_object()) throw ParseError(path.empty() ? "instance" : path, "expected an object");
  CTInstance inst;
  inst.circuit = circuit_from_json(need(doc, path, "circuit"), sub(path, "circuit"));
  inst.c0 = family_ref_from_json(need(doc, path, "c0"), sub(path, "c0"));
  inst.c1 = family_ref_from_json(need(doc, path, "c1"), sub(path, "c1"));
  inst.eps = need_number(doc, path, "eps");
  inst.delta = need_number(doc, path, "delta");
  inst.witness_qubits = need_int(doc, path, "witness_qubits");
  inst.dummy_qubits = need_int(doc, path, "dummy_qubits");
  inst.ancilla_qubits = need_int(doc, path, "ancilla_qubits");
  const Json& layout = need(doc, path, "layout");
  if (!layout.is_array()) throw ParseError(sub(path, "layout"), "expected an array");
  std::vector<RegisterLayout::Register> regs;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const std::string rp = sub(path, "layout") + "[" + std::to_string(i) + "]";
    regs.push_back({layout[i].value("name", std::string{}), need_int(layout[i], rp, "qubits")});
  }
  inst.layout = RegisterLayout(std::move(regs));
  const Json& traced = need(doc, path, "traced_wires");
  if (!traced.is_array()) throw ParseError(sub(path, "traced_wires"), "expected an array");
  for (const auto& w : traced) {
    if (!w.is_number_integer()) throw ParseError(sub(path, "traced_wires"), "expected integers");
    inst.traced_wires.push_back(w.get<int>());
  }
  if (inst.circuit.input_qubits() != inst.input_qubits()) {
    throw ParseError(sub(path, "circuit"), "input width does not match witness_qubits + dummy_qubits");
  }
  return inst;
}

// ---------------------------------------------------------------------------
// copy stage

CopyDistortion copy_distortion_bounds(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  const double q = 1.0 - p;
  return {2.0 * std::sqrt(std::max(0.0, 1.0 - p * p)), 2.0 * std::sqrt(std::max(0.0, 1.0 - q * q))};
}

CopyStage copy_stage(const VerifierCircuit& v, const Vector& psi, int reference_qubits) {
  const int h = v.witness_qubits(), a = v.ancilla_qubits();
  if (psi.size() != dim_of(h + reference_qubits)) throw DimensionError("copy_stage: input does not match h + reference");
  require_capacity(h + a + 1 + reference_qubits, "copy stage");
  Vector phi = kernels::insert_zero_qubits(psi, h + reference_qubits, h, a);
  std::vector<int> vw(static_cast<std::size_t>(h + a));
  std::iota(vw.begin(), vw.end(), 0);
  const int total = h + a + reference_qubits;
  kernels::apply_gate(phi, total, v.unitary(), vw);

  CopyStage out;
  out.accept_probability = 0.0;
  for (Index i = 0; i < phi.size(); ++i) {
    if ((i >> v.output_qubit()) & 1) out.accept_probability += std::norm(phi(i));
  }
  const int copy = h + a;
  out.copy_zero = kernels::insert_zero_qubits(phi, total, copy, 1);
  out.copy_one = out.copy_zero;
  const Matrix x = GateOp::fixed(GateKind::X, {0}).local_matrix();
  const std::array<int, 1> cw{copy};
  kernels::apply_gate(out.copy_one, total + 1, x, cw);
  out.phi_prime = out.copy_zero;
  const Matrix cx = GateOp::fixed(GateKind::CNOT, {0, 1}).local_matrix();
  const std::array<int, 2> cxw{v.output_qubit(), copy};
  kernels::apply_gate(out.phi_prime, total + 1, cx, cxw);
  return out;
}

double pure_state_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("pure_state_distance: dimension mismatch");
  const double f = std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - f));
}

// ---------------------------------------------------------------------------
// certificates

std::string_view to_string(CTSide side) { return side == CTSide::Yes ? "YES" : "NO"; }

namespace {

std::string basis_label(Index k, int qubits) {
  std::string s(static_cast<std::size_t>(qubits), '0');
  for (int q = 0; q < qubits; ++q) {
    if ((k >> q) & 1) s[static_cast<std::size_t>(qubits - 1 - q)] = '1';
  }
  return "|" + s + ">";
}

double probe(const QuantumChannel& a, const QuantumChannel& b, const Vector& psi, int ref) {
  return output_distance(a, b, psi * psi.adjoint(), ref);
}

}  // namespace

CTCertificate certify_yes(const CTInstance& inst, const VerifierCircuit& v, std::uint64_t seed) {
  const auto opt = max_accept_probability(v);
  if (opt.probability < 1.0 - inst.eps - 1e-12) {
    throw WrongSideError("certify_yes: best acceptance " + std::to_string(opt.probability) + " is below 1 - eps = " +
                         std::to_string(1.0 - inst.eps));
  }
  if (v.witness_qubits() != inst.witness_qubits) throw DimensionError("verifier does not match the instance");
  const int h = inst.witness_qubits, f = inst.dummy_qubits, n = h + f;
  const auto c = to_channel(inst.circuit);
  const auto c0 = to_channel(inst.c0.at(n));
  const Vector& gamma = opt.witness.amplitudes();

  CTCertificate cert;
  cert.side = CTSide::Yes;
  cert.claimed_bound = 3.0 * std::sqrt(inst.eps);
  cert.witness = opt.witness;

  const Index df = dim_of(f);
  std::uint64_t stream = 0;
  std::vector<std::pair<std::string, Vector>> xis;
  for (Index k = 0; k < std::min<Index>(df, 4); ++k) xis.emplace_back(basis_label(k, f), PureState::basis(df, k).amplitudes());
  if (f > 0) xis.emplace_back("random", random_pure_state(df, derive_seed(seed, stream++)).amplitudes());
  for (const auto& [label, xi] : xis) {
    cert.probes.push_back({"product xi=" + label, probe(c, c0, tensor(xi, gamma), 0)});
  }
  const int r = std::max(f, 1);
  for (int k = 0; k < 2; ++k) {
    const Vector chi = random_pure_state(dim_of(r + f), derive_seed(seed, stream++)).amplitudes();
    cert.probes.push_back({"entangled chi=random#" + std::to_string(k), probe(c, c0, tensor(chi, gamma), r)});
  }
  if (f > 0) {
    const Vector chi = PureState::maximally_entangled(f).amplitudes();
    cert.probes.push_back({"entangled chi=maximal", probe(c, c0, tensor(chi, gamma), f)});
  }

  for (const auto& p : cert.probes) cert.measured_bound = std::max(cert.measured_bound, p.distance);
  cert.subspace_qubits_achieved = f;
  cert.subspace_qubits_required = static_cast<double>(n) * (1.0 - inst.delta);
  cert.dimension_ok = static_cast<double>(f) >= cert.subspace_qubits_required - 1e-12;
  cert.passed = cert.measured_bound <= cert.claimed_bound + 1e-9 && cert.dimension_ok;
  return cert;
}

CTCertificate certify_no(const CTInstance& inst, const VerifierCircuit& v, int restarts, std::uint64_t seed,
                         int samples) {
  const auto opt = max_accept_probability(v);
  if (opt.probability > inst.eps + 1e-12) {
    throw WrongSideError("certify_no: best acceptance " + std::to_string(opt.probability) + " exceeds eps = " +
                         std::to_string(inst.eps));
  }
  if (v.witness_qubits() != inst.witness_qubits) throw DimensionError("verifier does not match the instance");
  const int n = inst.input_qubits();
  const auto c = to_channel(inst.circuit);
  const auto c1 = to_channel(inst.c1.at(n));

  CTCertificate cert;
  cert.side = CTSide::No;
  cert.heuristic = true;
  cert.claimed_bound = 3.0 * std::sqrt(inst.eps);
  const auto d = diamond_distance(c, c1, restarts, seed);
  cert.diamond_lower_bound = d.lower_bound;
  cert.witness = d.witness;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vector psi = random_pure_state(dim_of(2 * n), derive_seed(seed, 1000 + static_cast<std::uint64_t>(i))).amplitudes();
    const double dist = probe(c, c1, psi, n);
    worst = std::max(worst, dist);
    cert.probes.push_back({"entangled sample#" + std::to_string(i), dist});
  }
  cert.measured_bound = std::max(worst, d.lower_bound);
  cert.passed = d.lower_bound <= cert.claimed_bound + 1e-6 && worst <= cert.claimed_bound + 1e-9;
  return cert;
}

WellformednessReport wellformedness_check(const CircuitFamily& c0, const CircuitFamily& c1, double eps, double delta,
                                          int width, int samples, std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  require_capacity(2 * width, "wellformedness probes");
  const auto a = to_channel(c0.at(width));
  const auto b = to_channel(c1.at(width));
  if (a.out_qubits() != b.out_qubits()) throw DimensionError("families have different output widths");

  WellformednessReport rep;
  rep.min_distance = 2.0;
  auto consider = [&](const std::string& label, double dist) {
    ++rep.samples_evaluated;
    if (dist < rep.min_distance) {
      rep.min_distance = dist;
      rep.min_probe = label;
    }
  };
  const Index d = dim_of(width);
  for (Index k = 0; k < std::min<Index>(d, 8); ++k) {
    consider("basis " + basis_label(k, width), probe(a, b, PureState::basis(d, k).amplitudes(), 0));
  }
  consider("plus", probe(a, b, Vector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0)), 0));
  for (int i = 0; i < samples; ++i) {
    const Vector psi = random_pure_state(dim_of(2 * width), derive_seed(seed, static_cast<std::uint64_t>(i))).amplitudes();
    consider("entangled sample#" + std::to_string(i), probe(a, b, psi, width));
  }
  rep.suspect = rep.min_distance <= 2.0 * eps;
  rep.subspace_clause_checked = delta >= 1.0;
  return rep;
}

}  // namespace qct

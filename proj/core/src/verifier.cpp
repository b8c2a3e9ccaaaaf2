#include "qct/verifier.hpp"

#include <cmath>
#include <numeric>

namespace qct {
namespace {

Matrix accept_projector_diag(const VerifierCircuit& v) {
  const Index d = dim_of(v.total_qubits());
  Matrix p = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    if ((i >> v.output_qubit()) & 1) p(i, i) = 1.0;
  }
  return p;
}

}  // namespace

VerifierCircuit::VerifierCircuit(int witness_qubits, int ancilla_qubits, Matrix unitary, int output_qubit)
    : witness_qubits_(witness_qubits),
      ancilla_qubits_(ancilla_qubits),
      unitary_(std::move(unitary)),
      output_qubit_(output_qubit) {
  if (witness_qubits < 1) throw DomainError("verifier needs at least one witness qubit");
  if (ancilla_qubits < 0) throw DomainError("verifier ancilla count must be non-negative");
  require_capacity(total_qubits(), "verifier");
  if (output_qubit < 0 || output_qubit >= total_qubits()) throw DomainError("verifier output qubit out of range");
  const Index d = dim_of(total_qubits());
  if (unitary_.rows() != d || unitary_.cols() != d) throw DimensionError("verifier unitary has the wrong size");
  if ((unitary_.adjoint() * unitary_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kUnitTol) {
    throw InvalidStateError("verifier matrix is not unitary");
  }
}

MixedStateCircuit VerifierCircuit::circuit() const {
  std::vector<int> wires(static_cast<std::size_t>(total_qubits()));
  std::iota(wires.begin(), wires.end(), 0);
  return CircuitBuilder(total_qubits()).unitary(unitary_, wires).build();
}

double accept_probability(const VerifierCircuit& v, const PureState& witness) {
  if (witness.dim() != dim_of(v.witness_qubits())) {
    throw DimensionError("witness has dimension " + std::to_string(witness.dim()) + ", verifier expects " +
                         std::to_string(dim_of(v.witness_qubits())));
  }
  const Vector phi = v.unitary().leftCols(witness.dim()) * witness.amplitudes();
  double p = 0.0;
  for (Index i = 0; i < phi.size(); ++i) {
    if ((i >> v.output_qubit()) & 1) p += std::norm(phi(i));
  }
  return p;
}

HermitianObservable acceptance_operator(const VerifierCircuit& v) {
  const Matrix b = v.unitary().leftCols(dim_of(v.witness_qubits()));
  Matrix m = b.adjoint() * accept_projector_diag(v) * b;
  m = 0.5 * (m + m.adjoint()).eval();
  return HermitianObservable(std::move(m));
}

WitnessOptimum max_accept_probability(const VerifierCircuit& v) {
  const auto m = acceptance_operator(v);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  const Index top = es.eigenvalues().size() - 1;
  Vector w = es.eigenvectors().col(top);
  w /= w.norm();
  return {es.eigenvalues()(top), PureState(std::move(w))};
}

double rotation_angle(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("acceptance probability must lie in [0, 1]");
  return 2.0 * std::asin(std::sqrt(p));
}

VerifierCircuit rotation_verifier(double p) {
  ToyVerifierSpec spec;
  spec.kind = "rotation";
  spec.theta = rotation_angle(p);
  return make_toy_verifier(spec);
}

VerifierCircuit make_toy_verifier(const ToyVerifierSpec& spec) {
  const int h = spec.witness_qubits;
  if (h < 1) throw DomainError("toy verifier needs at least one witness qubit");
  const Index dw = dim_of(h);
  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;

  if (spec.kind == "always_reject") {
    return VerifierCircuit(h, 1, Matrix::Identity(2 * dw, 2 * dw), h);
  }
  if (spec.kind == "target_state") {
    Vector s = spec.target;
    if (s.size() == 0) {
      s = Vector::Zero(dw);
      s(dw - 1) = 1.0;
    }
    if (s.size() != dw) throw DimensionError("target state does not match witness size");
    s /= s.norm();
    const Matrix proj = s * s.adjoint();
    const Matrix i2 = Matrix::Identity(2, 2);
    Matrix u = Matrix::Identity(2 * dw, 2 * dw) - tensor(i2, proj) + tensor(x, proj);
    return VerifierCircuit(h, 1, std::move(u), h);
  }
  if (spec.kind == "rotation") {
    if (h != 1) throw DomainError("rotation verifier has exactly one witness qubit");
    Matrix ry(2, 2);
    const double c = std::cos(spec.theta / 2.0), s = std::sin(spec.theta / 2.0);
    ry << c, -s, s, c;
    // Controlled on the witness qubit (bit 0), rotating the ancilla (bit 1).
    Matrix u = Matrix::Identity(4, 4);
    u(1, 1) = ry(0, 0);
    u(1, 3) = ry(0, 1);
    u(3, 1) = ry(1, 0);
    u(3, 3) = ry(1, 1);
    return VerifierCircuit(1, 1, std::move(u), 1);
  }
  if (spec.kind == "random_unitary") {
    const int a = spec.ancilla_qubits;
    return VerifierCircuit(h, a, random_unitary(dim_of(h + a), spec.seed), 0);
  }
  throw DomainError("unknown toy verifier kind '" + spec.kind + "'");
}

OrderedJson verifier_to_json(const VerifierCircuit& v) {
  OrderedJson j;
  j["witness_qubits"] = v.witness_qubits();
  j["ancilla_qubits"] = v.ancilla_qubits();
  j["circuit"] = circuit_to_json(v.circuit());
  j["output_qubit"] = v.output_qubit();
  return j;
}

VerifierCircuit verifier_from_json(const Json& doc, const std::string& path) {
  auto field = [&](const char* name) -> const Json& {
    auto it = doc.find(name);
    const std::string p = path.empty() ? name : path + "." + name;
    if (it == doc.end()) throw ParseError(p, "missing required field");
    return *it;
  };
  if (!doc.is_object()) throw ParseError(path.empty() ? "verifier" : path, "expected an object");
  const Json& h = field("witness_qubits");
  const Json& a = field("ancilla_qubits");
  if (!h.is_number_integer() || !a.is_number_integer()) {
    throw ParseError(path.empty() ? "verifier" : path, "qubit counts must be integers");
  }
  int out = 0;
  if (auto it = doc.find("output_qubit"); it != doc.end()) {
    if (!it->is_number_integer()) throw ParseError(path.empty() ? "output_qubit" : path + ".output_qubit", "expected an integer");
    out = it->get<int>();
  }
  const auto circuit = circuit_from_json(field("circuit"), path.empty() ? "circuit" : path + ".circuit");
  const int total = h.get<int>() + a.get<int>();
  if (circuit.input_qubits() != total || circuit.output_qubits() != total || circuit.ancilla_qubits() != 0) {
    throw ParseError(path.empty() ? "circuit" : path + ".circuit",
                     "verifier circuit must be unitary on witness_qubits + ancilla_qubits wires");
  }
  return VerifierCircuit(h.get<int>(), a.get<int>(), canonicalize(circuit).unitary, out);
}

}  // namespace qct

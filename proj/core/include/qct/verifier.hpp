#pragma once

// A verifier is a unitary V on witness ⊗ ancilla registers (witness on the
// low qubits); it accepts when a designated qubit of V's output reads |1>
// after the ancillas start in |0...0>.

#include <cstdint>
#include <string>

#include "qct/circuit.hpp"
#include "qct/circuit_io.hpp"
#include "qct/state_algebra.hpp"

namespace qct {

class VerifierCircuit {
 public:
  VerifierCircuit(int witness_qubits, int ancilla_qubits, Matrix unitary, int output_qubit = 0);

  int witness_qubits() const noexcept { return witness_qubits_; }
  int ancilla_qubits() const noexcept { return ancilla_qubits_; }
  int total_qubits() const noexcept { return witness_qubits_ + ancilla_qubits_; }
  int output_qubit() const noexcept { return output_qubit_; }
  const Matrix& unitary() const noexcept { return unitary_; }

  /// V as a single-block circuit on witness + ancilla wires.
  MixedStateCircuit circuit() const;

 private:
  int witness_qubits_;
  int ancilla_qubits_;
  Matrix unitary_;
  int output_qubit_;
};

/// <psi 0| V^dagger P1 V |psi 0>
double accept_probability(const VerifierCircuit& v, const PureState& witness);
/// M with accept_probability(v, psi) = <psi|M|psi>; 0 <= M <= I.
HermitianObservable acceptance_operator(const VerifierCircuit& v);

struct WitnessOptimum {
  double probability;
  PureState witness;
};
/// Top eigenpair of the acceptance operator.
WitnessOptimum max_accept_probability(const VerifierCircuit& v);

/// Fixture description. kind is one of "always_reject", "target_state",
/// "rotation", "random_unitary".
struct ToyVerifierSpec {
  std::string kind;
  int witness_qubits = 1;
  double theta = 0.0;        // rotation
  Vector target;             // target_state; defaults to |1...1>
  std::uint64_t seed = 0;    // random_unitary
  int ancilla_qubits = 1;    // random_unitary
};

VerifierCircuit make_toy_verifier(const ToyVerifierSpec& spec);
/// Rotation verifier whose best witness |1> is accepted with probability p.
VerifierCircuit rotation_verifier(double accept_probability);
/// theta with sin^2(theta/2) = p.
double rotation_angle(double accept_probability);

/// {"witness_qubits": h, "ancilla_qubits": a, "circuit": <circuit JSON>, "output_qubit": o}
OrderedJson verifier_to_json(const VerifierCircuit& v);
VerifierCircuit verifier_from_json(const Json& doc, const std::string& path = "");

}  // namespace qct

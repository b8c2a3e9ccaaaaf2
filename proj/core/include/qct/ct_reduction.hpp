#pragma once

// Compiles a verifier and two circuit families into a circuit-testing
// instance: run V, copy the output bit, undo V, then apply C0 if the copy
// reads 1 (accept) and C1 otherwise.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qct/channel_algebra.hpp"
#include "qct/circuit.hpp"
#include "qct/circuit_io.hpp"
#include "qct/verifier.hpp"

namespace qct {

/// Named generator: input width -> circuit. Registry names are "identity",
/// "depolarizing", "pauli_x_first" and "pauli_keyed" (params {"key": k}).
struct CircuitFamily {
  std::string name;
  Json params = Json::object();
  std::function<MixedStateCircuit(int)> generate;

  MixedStateCircuit at(int width) const;
};

CircuitFamily identity_family();
CircuitFamily depolarizing_family();
CircuitFamily pauli_x_first_family();
CircuitFamily pauli_keyed_member(std::uint64_t key);
/// Throws DomainError for an unknown name or bad params.
CircuitFamily family_by_name(const std::string& name, const Json& params = Json::object());
std::vector<std::string> family_names();

/// f = ceil(h (1 - delta) / delta)
int dummy_qubits(int witness_qubits, double delta);

struct CTInstance {
  MixedStateCircuit circuit;
  CircuitFamily c0;
  CircuitFamily c1;
  double eps = 0.0;
  double delta = 1.0;
  int witness_qubits = 0;
  int dummy_qubits = 0;
  int ancilla_qubits = 0;
  /// Wire layout before the final trace: copy, A, F, H (H on qubit 0).
  RegisterLayout layout;
  /// Wires discarded at the end (garbage G followed by the copy qubit).
  std::vector<int> traced_wires;

  int input_qubits() const noexcept { return witness_qubits + dummy_qubits; }
  int total_qubits() const noexcept { return input_qubits() + ancilla_qubits + 1; }
};

CTInstance build_ct_circuit(const VerifierCircuit& v, const CircuitFamily& c0, const CircuitFamily& c1, double eps,
                            double delta);
/// Same construction with C1 = X^x Z^z keyed on every input qubit, left as
/// controlled keyed_pauli placeholders (key bits 2(h+f)).
MixedStateCircuit build_ct_keyed_template(const VerifierCircuit& v, const CircuitFamily& c0, double delta);

OrderedJson ct_instance_to_json(const CTInstance& inst);
CTInstance ct_instance_from_json(const Json& doc, const std::string& path = "");

struct CopyDistortion {
  double yes_side;  // distance of |phi'> to |1>|phi>
  double no_side;   // distance of |phi'> to |0>|phi>
};
/// (2 sqrt(1 - p^2), 2 sqrt(1 - (1 - p)^2))
CopyDistortion copy_distortion_bounds(double p);

/// States right after the CNOT copy, on wires [H, A, copy, R].
struct CopyStage {
  double accept_probability;
  Vector phi_prime;
  Vector copy_zero;  // |0>_copy ⊗ V|psi, 0>
  Vector copy_one;   // |1>_copy ⊗ V|psi, 0>
};
/// psi lives on (R ⊗ H) with `reference_qubits` reference qubits above H.
CopyStage copy_stage(const VerifierCircuit& v, const Vector& psi, int reference_qubits = 0);
/// Trace distance ||a a^† - b b^†||_tr of two pure states.
double pure_state_distance(const Vector& a, const Vector& b);

enum class CTSide { Yes, No };
std::string_view to_string(CTSide side);

struct ProbeRecord {
  std::string label;
  double distance;
};

struct CTCertificate {
  CTSide side = CTSide::Yes;
  double measured_bound = 0.0;
  double claimed_bound = 0.0;
  bool passed = false;
  /// NO side: sampled distances and the ascent value only bound the diamond
  /// distance from below, so a pass is consistency, not proof.
  bool heuristic = false;
  std::vector<ProbeRecord> probes;
  PureState witness = PureState::zero(0);
  double diamond_lower_bound = 0.0;
  /// YES side: the subspace |gamma> ⊗ F has 2^achieved dimensions; required
  /// exponent is (h + f)(1 - delta).
  int subspace_qubits_achieved = 0;
  double subspace_qubits_required = 0.0;
  bool dimension_ok = true;
};

CTCertificate certify_yes(const CTInstance& inst, const VerifierCircuit& v, std::uint64_t seed = 0);
CTCertificate certify_no(const CTInstance& inst, const VerifierCircuit& v, int restarts = 20,
                         std::uint64_t seed = 0, int samples = 50);

struct WellformednessReport {
  double min_distance = 0.0;
  std::string min_probe;
  int samples_evaluated = 0;
  bool suspect = false;
  /// False when delta < 1: the large-subspace clause is not decided by sampling.
  bool subspace_clause_checked = true;
};

WellformednessReport wellformedness_check(const CircuitFamily& c0, const CircuitFamily& c1, double eps, double delta,
                                          int width, int samples, std::uint64_t seed);

}  // namespace qct

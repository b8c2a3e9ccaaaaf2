#pragma once

// Keyed channel families, the Pauli one-time pad, the completely
// depolarizing channel, and distinguishability estimates between channels.

#include <cstdint>
#include <string>

#include "qct/circuit.hpp"
#include "qct/circuit_io.hpp"
#include "qct/quantum_channel.hpp"

namespace qct {

/// Maps a classical key k in [0, 2^key_bits) to a circuit by expanding the
/// keyed_pauli placeholders of a template.
class KeyedChannelFamily {
 public:
  KeyedChannelFamily(int key_bits, MixedStateCircuit template_circuit);

  int key_bits() const noexcept { return key_bits_; }
  std::uint64_t key_count() const noexcept { return std::uint64_t{1} << key_bits_; }
  int in_qubits() const noexcept { return template_.input_qubits(); }
  int out_qubits() const noexcept { return template_.output_qubits(); }
  const MixedStateCircuit& template_circuit() const noexcept { return template_; }

  /// Throws DomainError for keys outside [0, 2^key_bits).
  MixedStateCircuit circuit(std::uint64_t key) const;
  QuantumChannel channel(std::uint64_t key) const;

 private:
  int key_bits_;
  MixedStateCircuit template_;
};

/// {"key_bits": m, "template": <circuit JSON with keyed_pauli placeholders>}
OrderedJson family_to_json(const KeyedChannelFamily& f);
KeyedChannelFamily family_from_json(const Json& doc, const std::string& path = "");

/// Omega: every input to I/dim_out. Requires out_qubits >= in_qubits.
QuantumChannel depolarizing(int in_qubits, int out_qubits);
/// Circuit for Omega: each output qubit gets a Pauli selected by two |+>
/// ancillas, which are then traced out.
MixedStateCircuit depolarizing_circuit(int in_qubits, int out_qubits);

/// X^{x_i} Z^{z_i} on qubit i with x_i = bit 2i and z_i = bit 2i+1 of the key.
MixedStateCircuit pauli_keyed(int qubits, std::uint64_t key);
/// Inverse of pauli_keyed for the same key.
MixedStateCircuit pauli_decrypt(int qubits, std::uint64_t key);
KeyedChannelFamily pauli_keyed_family(int qubits);
KeyedChannelFamily pauli_decrypt_family(int qubits);
/// Every key acts as the identity on `qubits` qubits.
KeyedChannelFamily key_ignoring_family(int qubits, int key_bits);

/// Uniform average over all 2^m keys. Throws BudgetError for m > 12.
QuantumChannel key_average(const KeyedChannelFamily& f);

struct DiamondOptions {
  int restarts = 20;
  std::uint64_t seed = 0;
  int max_iterations = 5000;
  /// Stop a restart once an iteration improves the value by less than this.
  double tolerance = 1e-13;
  /// Reference size; -1 means dim R = dim_in (the stabilized value), 0 gives
  /// the unentangled trace-norm variant.
  int reference_qubits = -1;
};

struct DiamondEstimate {
  double lower_bound = 0.0;
  PureState witness = PureState::zero(0);
  int iterations = 0;
};

/// Certified lower bound on ||a - b||_diamond by multi-restart alternating
/// ascent over pure inputs on H ⊗ R.
DiamondEstimate diamond_distance(const QuantumChannel& a, const QuantumChannel& b, const DiamondOptions& options = {});
DiamondEstimate diamond_distance(const QuantumChannel& a, const QuantumChannel& b, int restarts, std::uint64_t seed);

/// ||((a - b) ⊗ id_R)(rho)||_tr
double output_distance(const QuantumChannel& a, const QuantumChannel& b, const Matrix& rho, int reference_qubits);

enum class PrivacyVerdict { ConsistentWithPrivate, Violates };
std::string_view to_string(PrivacyVerdict v);

struct PrivacyReport {
  double eps = 0.0;
  /// max_k lower bound on ||D_k ∘ E_k - id||_diamond
  double decryption_distance = 0.0;
  std::uint64_t worst_key = 0;
  /// lower bound on ||avg_k E_k - Omega||_diamond
  double average_distance = 0.0;
  /// Same two quantities without a reference system.
  double decryption_distance_trace = 0.0;
  double average_distance_trace = 0.0;
  PrivacyVerdict verdict = PrivacyVerdict::Violates;
};

PrivacyReport check_eps_private(const KeyedChannelFamily& f, const KeyedChannelFamily& decryptor, double eps,
                                const DiamondOptions& options = {});

}  // namespace qct

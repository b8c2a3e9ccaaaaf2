#pragma once

// Mixed-state circuit IR: unitary gates plus ancilla introduction and
// trace-out pseudo-gates over an ordered list of live wires.
//
// Wire semantics: wires are numbered 0..live-1 with wire w on qubit w.
// IntroduceAncillas(k) appends k wires in |0> above the current top wire.
// TraceOut(ws) discards the listed wires; surviving wires close up in order.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qct/quantum_channel.hpp"
#include "qct/state_algebra.hpp"

namespace qct {

enum class GateKind {
  H,
  S,
  T,
  X,
  Y,
  Z,
  CNOT,   // targets = {control, target}
  CCNOT,  // targets = {control, control, target}
  Unitary,
  Controlled,  // `matrix` on targets, coherently controlled by `control`
  Ancilla,
  TraceOut,
  KeyedPauli,  // placeholder expanded per key, see MixedStateCircuit::with_key
};

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

struct GateOp {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  Matrix matrix;          // Unitary, Controlled
  int control = -1;       // Controlled; optional for KeyedPauli
  int count = 0;          // Ancilla
  std::array<int, 2> key_bits{-1, -1};  // KeyedPauli: bit selecting X, bit selecting Z
  bool inverse = false;   // KeyedPauli: apply Z^z X^x instead of X^x Z^z

  static GateOp fixed(GateKind kind, std::vector<int> targets);
  static GateOp unitary(Matrix m, std::vector<int> targets);
  static GateOp controlled(int control, Matrix m, std::vector<int> targets);
  static GateOp ancilla(int count);
  static GateOp trace_out(std::vector<int> wires);
  static GateOp keyed_pauli(int target, int x_bit, int z_bit, int control = -1, bool inverse = false);

  bool is_unitary() const noexcept;
  /// Local matrix of a unitary op. For Controlled the control is the most
  /// significant local qubit, matching `wires()`.
  Matrix local_matrix() const;
  /// Wires touched by a unitary op, in local-matrix bit order.
  std::vector<int> wires() const;
};

class MixedStateCircuit {
 public:
  MixedStateCircuit() = default;
  /// Validates every op against the live wires at its position. When
  /// `declared_outputs` is given it must match the replayed wire count.
  MixedStateCircuit(int input_qubits, std::vector<GateOp> ops, std::optional<int> declared_outputs = std::nullopt,
                    std::optional<RegisterLayout> layout = std::nullopt);

  int input_qubits() const noexcept { return input_qubits_; }
  int output_qubits() const noexcept { return output_qubits_; }
  /// Largest number of simultaneously live wires.
  int peak_qubits() const noexcept { return peak_qubits_; }
  int ancilla_qubits() const noexcept { return ancilla_qubits_; }
  const std::vector<GateOp>& ops() const noexcept { return ops_; }
  const std::optional<RegisterLayout>& layout() const noexcept { return layout_; }

  bool has_placeholders() const noexcept;
  /// Highest key bit referenced by a placeholder plus one (0 if none).
  int placeholder_key_bits() const noexcept;
  /// Expands KeyedPauli placeholders for the given key.
  MixedStateCircuit with_key(std::uint64_t key) const;

  /// this followed by next (next's inputs are this circuit's outputs).
  MixedStateCircuit then(const MixedStateCircuit& next) const;

 private:
  int input_qubits_ = 0;
  int output_qubits_ = 0;
  int peak_qubits_ = 0;
  int ancilla_qubits_ = 0;
  std::vector<GateOp> ops_;
  std::optional<RegisterLayout> layout_;
};

/// Fluent single-threaded construction of circuits.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(int input_qubits) : input_qubits_(input_qubits), live_(input_qubits) {}

  CircuitBuilder& gate(GateKind kind, std::vector<int> targets);
  CircuitBuilder& h(int w) { return gate(GateKind::H, {w}); }
  CircuitBuilder& x(int w) { return gate(GateKind::X, {w}); }
  CircuitBuilder& z(int w) { return gate(GateKind::Z, {w}); }
  CircuitBuilder& cnot(int control, int target) { return gate(GateKind::CNOT, {control, target}); }
  CircuitBuilder& unitary(Matrix m, std::vector<int> targets);
  CircuitBuilder& controlled(int control, Matrix m, std::vector<int> targets);
  /// Returns the index of the first new wire through `first_wire` when non-null.
  CircuitBuilder& ancilla(int count, int* first_wire = nullptr);
  CircuitBuilder& trace_out(std::vector<int> wires);
  CircuitBuilder& keyed_pauli(int target, int x_bit, int z_bit, int control = -1, bool inverse = false);
  CircuitBuilder& append(const GateOp& op);

  int live_wires() const noexcept { return live_; }
  MixedStateCircuit build(std::optional<RegisterLayout> layout = std::nullopt) const;

 private:
  int input_qubits_;
  int live_;
  std::vector<GateOp> ops_;
};

/// Ancillas hoisted to the start, traces deferred to the end.
struct CanonicalCircuit {
  int input_qubits = 0;
  int ancilla_qubits = 0;
  /// Unitary on inputs (low qubits) and ancillas (high qubits).
  Matrix unitary;
  /// Positions among the input_qubits + ancilla_qubits wires, ascending.
  std::vector<int> traced_wires;
  int output_qubits = 0;
  /// Unitary gate sequence on the canonical wires that `unitary` is the product of.
  std::vector<GateOp> gates;

  int total_qubits() const noexcept { return input_qubits + ancilla_qubits; }
  /// Isometry input -> (inputs ⊗ ancillas): the columns of `unitary` with ancillas in |0>.
  Matrix isometry() const { return unitary.leftCols(dim_of(input_qubits)); }
};

CanonicalCircuit canonicalize(const MixedStateCircuit& c);
/// Adds `extra` unused ancillas above the existing ones and traces them at the end.
CanonicalCircuit padded(const CanonicalCircuit& c, int extra);
/// Rebuilds a MixedStateCircuit from canonical form (ancillas, gates, traces).
MixedStateCircuit to_circuit(const CanonicalCircuit& c);

/// (c ⊗ id_R)(rho); the reference occupies the qubits above the circuit inputs.
DensityOperator evaluate(const MixedStateCircuit& c, const DensityOperator& rho, int reference_qubits = 0);
DensityOperator evaluate(const CanonicalCircuit& c, const DensityOperator& rho, int reference_qubits = 0);
/// Pure-input evaluation through state vectors, tracing only at the end.
Matrix evaluate_pure(const CanonicalCircuit& c, const Vector& psi, int reference_qubits = 0);

QuantumChannel to_channel(const MixedStateCircuit& c);
QuantumChannel to_channel(const CanonicalCircuit& c);

}  // namespace qct

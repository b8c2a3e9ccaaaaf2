#include "qct/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qct/kernels.hpp"

namespace qct {
namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 13> kGateNames{{
    {GateKind::H, "H"},
    {GateKind::S, "S"},
    {GateKind::T, "T"},
    {GateKind::X, "X"},
    {GateKind::Y, "Y"},
    {GateKind::Z, "Z"},
    {GateKind::CNOT, "CNOT"},
    {GateKind::CCNOT, "CCNOT"},
    {GateKind::Unitary, "unitary"},
    {GateKind::Controlled, "controlled"},
    {GateKind::Ancilla, "ancilla"},
    {GateKind::TraceOut, "traceout"},
    {GateKind::KeyedPauli, "keyed_pauli"},
}};

int fixed_arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::S:
    case GateKind::T:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::KeyedPauli:
      return 1;
    case GateKind::CNOT:
      return 2;
    case GateKind::CCNOT:
      return 3;
    default:
      return -1;
  }
}

Matrix single_qubit(GateKind kind) {
  using std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  Matrix m(2, 2);
  switch (kind) {
    case GateKind::H:
      m << 1.0 / sqrt2, 1.0 / sqrt2, 1.0 / sqrt2, -1.0 / sqrt2;
      break;
    case GateKind::S:
      m << 1.0, 0.0, 0.0, i;
      break;
    case GateKind::T:
      m << 1.0, 0.0, 0.0, std::exp(i * (std::numbers::pi / 4.0));
      break;
    case GateKind::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case GateKind::Y:
      m << 0.0, -i, i, 0.0;
      break;
    case GateKind::Z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
    default:
      throw DomainError("not a single-qubit gate");
  }
  return m;
}

// Local permutation matrix flipping the top local bit when all lower bits are set.
Matrix multi_controlled_x(int arity) {
  const Index d = dim_of(arity);
  Matrix m = Matrix::Identity(d, d);
  const Index controls = dim_of(arity - 1) - 1;
  const Index a = controls, b = controls | dim_of(arity - 1);
  m(a, a) = 0.0;
  m(b, b) = 0.0;
  m(a, b) = 1.0;
  m(b, a) = 1.0;
  return m;
}

bool is_unitary_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= kUnitTol;
}

std::string op_prefix(std::size_t index, const GateOp& op) {
  return "op " + std::to_string(index) + " (" + std::string(gate_name(op.kind)) + ")";
}

void require_wires(const std::vector<int>& wires, int live, const std::string& prefix) {
  for (std::size_t i = 0; i < wires.size(); ++i) {
    if (wires[i] < 0 || wires[i] >= live) {
      throw DimensionError(prefix + ": wire " + std::to_string(wires[i]) + " is not live (" + std::to_string(live) +
                           " live wires)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (wires[j] == wires[i]) throw DimensionError(prefix + ": wire " + std::to_string(wires[i]) + " repeated");
    }
  }
}

}  // namespace

std::string_view gate_name(GateKind kind) {
  for (const auto& [k, name] : kGateNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kGateNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// GateOp

GateOp GateOp::fixed(GateKind kind, std::vector<int> targets) {
  GateOp op;
  op.kind = kind;
  op.targets = std::move(targets);
  return op;
}

GateOp GateOp::unitary(Matrix m, std::vector<int> targets) {
  GateOp op;
  op.kind = GateKind::Unitary;
  op.matrix = std::move(m);
  op.targets = std::move(targets);
  return op;
}

GateOp GateOp::controlled(int control, Matrix m, std::vector<int> targets) {
  GateOp op;
  op.kind = GateKind::Controlled;
  op.control = control;
  op.matrix = std::move(m);
  op.targets = std::move(targets);
  return op;
}

GateOp GateOp::ancilla(int count) {
  GateOp op;
  op.kind = GateKind::Ancilla;
  op.count = count;
  return op;
}

GateOp GateOp::trace_out(std::vector<int> wires) {
  GateOp op;
  op.kind = GateKind::TraceOut;
  op.targets = std::move(wires);
  return op;
}

GateOp GateOp::keyed_pauli(int target, int x_bit, int z_bit, int control, bool inverse) {
  GateOp op;
  op.kind = GateKind::KeyedPauli;
  op.targets = {target};
  op.key_bits = {x_bit, z_bit};
  op.control = control;
  op.inverse = inverse;
  return op;
}

bool GateOp::is_unitary() const noexcept {
  return kind != GateKind::Ancilla && kind != GateKind::TraceOut && kind != GateKind::KeyedPauli;
}

Matrix GateOp::local_matrix() const {
  switch (kind) {
    case GateKind::CNOT:
      return multi_controlled_x(2);
    case GateKind::CCNOT:
      return multi_controlled_x(3);
    case GateKind::Unitary:
      return matrix;
    case GateKind::Controlled:
      return kernels::controlled(matrix);
    case GateKind::Ancilla:
    case GateKind::TraceOut:
    case GateKind::KeyedPauli:
      throw DomainError(std::string(gate_name(kind)) + " has no unitary matrix");
    default:
      return single_qubit(kind);
  }
}

std::vector<int> GateOp::wires() const {
  std::vector<int> w = targets;
  if (kind == GateKind::Controlled || (kind == GateKind::KeyedPauli && control >= 0)) w.push_back(control);
  return w;
}

// ---------------------------------------------------------------------------
// MixedStateCircuit

MixedStateCircuit::MixedStateCircuit(int input_qubits, std::vector<GateOp> ops, std::optional<int> declared_outputs,
                                     std::optional<RegisterLayout> layout)
    : input_qubits_(input_qubits), ops_(std::move(ops)), layout_(std::move(layout)) {
  if (input_qubits < 0) throw DomainError("input_qubits must be non-negative");
  if (layout_ && layout_->total_qubits() != input_qubits) {
    throw DimensionError("register layout covers " + std::to_string(layout_->total_qubits()) +
                         " qubits, circuit has " + std::to_string(input_qubits) + " inputs");
  }
  int live = input_qubits;
  int peak = live;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const GateOp& op = ops_[i];
    const std::string prefix = op_prefix(i, op);
    switch (op.kind) {
      case GateKind::Ancilla:
        if (op.count < 1) throw DomainError(prefix + ": count must be >= 1");
        live += op.count;
        ancilla_qubits_ += op.count;
        peak = std::max(peak, live);
        require_capacity(live, prefix);
        break;
      case GateKind::TraceOut:
        if (op.targets.empty()) throw DomainError(prefix + ": needs at least one wire");
        require_wires(op.targets, live, prefix);
        live -= static_cast<int>(op.targets.size());
        break;
      case GateKind::Unitary:
      case GateKind::Controlled: {
        if (op.targets.empty()) throw DomainError(prefix + ": needs at least one target");
        require_wires(op.wires(), live, prefix);
        if (op.matrix.rows() != dim_of(static_cast<int>(op.targets.size())) || op.matrix.cols() != op.matrix.rows()) {
          throw DimensionError(prefix + ": matrix size does not match " + std::to_string(op.targets.size()) +
                               " target(s)");
        }
        if (!op.matrix.allFinite() || !is_unitary_matrix(op.matrix)) {
          throw InvalidStateError(prefix + ": matrix is not unitary");
        }
        break;
      }
      case GateKind::KeyedPauli:
        if (op.targets.size() != 1) throw DomainError(prefix + ": expects 1 target");
        if (op.key_bits[0] < 0 || op.key_bits[1] < 0 || op.key_bits[0] > 62 || op.key_bits[1] > 62) {
          throw DomainError(prefix + ": key bit indices must lie in [0, 62]");
        }
        require_wires(op.wires(), live, prefix);
        break;
      default: {
        const int arity = fixed_arity(op.kind);
        if (static_cast<int>(op.targets.size()) != arity) {
          throw DomainError(prefix + ": expects " + std::to_string(arity) + " target(s), got " +
                            std::to_string(op.targets.size()));
        }
        require_wires(op.targets, live, prefix);
        break;
      }
    }
  }
  output_qubits_ = live;
  peak_qubits_ = peak;
  require_capacity(peak_qubits_, "circuit");
  if (declared_outputs && *declared_outputs != output_qubits_) {
    throw DimensionError("declared output_qubits " + std::to_string(*declared_outputs) + " but ops leave " +
                         std::to_string(output_qubits_) + " live wires");
  }
}

bool MixedStateCircuit::has_placeholders() const noexcept {
  return std::any_of(ops_.begin(), ops_.end(), [](const GateOp& op) { return op.kind == GateKind::KeyedPauli; });
}

int MixedStateCircuit::placeholder_key_bits() const noexcept {
  int bits = 0;
  for (const auto& op : ops_) {
    if (op.kind == GateKind::KeyedPauli) bits = std::max({bits, op.key_bits[0] + 1, op.key_bits[1] + 1});
  }
  return bits;
}

MixedStateCircuit MixedStateCircuit::with_key(std::uint64_t key) const {
  std::vector<GateOp> ops;
  ops.reserve(ops_.size());
  for (const auto& op : ops_) {
    if (op.kind != GateKind::KeyedPauli) {
      ops.push_back(op);
      continue;
    }
    const bool x = (key >> op.key_bits[0]) & 1;
    const bool z = (key >> op.key_bits[1]) & 1;
    auto emit = [&](GateKind pauli) {
      if (op.control >= 0) {
        ops.push_back(GateOp::controlled(op.control, single_qubit(pauli), op.targets));
      } else {
        ops.push_back(GateOp::fixed(pauli, op.targets));
      }
    };
    // X^x Z^z as an operator means Z acts first.
    if (op.inverse) {
      if (x) emit(GateKind::X);
      if (z) emit(GateKind::Z);
    } else {
      if (z) emit(GateKind::Z);
      if (x) emit(GateKind::X);
    }
  }
  return MixedStateCircuit(input_qubits_, std::move(ops), output_qubits_, layout_);
}

MixedStateCircuit MixedStateCircuit::then(const MixedStateCircuit& next) const {
  if (next.input_qubits_ != output_qubits_) {
    throw DimensionError("cannot append a " + std::to_string(next.input_qubits_) + "-input circuit after " +
                         std::to_string(output_qubits_) + " outputs");
  }
  std::vector<GateOp> ops = ops_;
  ops.insert(ops.end(), next.ops_.begin(), next.ops_.end());
  return MixedStateCircuit(input_qubits_, std::move(ops), next.output_qubits_, layout_);
}

// ---------------------------------------------------------------------------
// CircuitBuilder

CircuitBuilder& CircuitBuilder::append(const GateOp& op) {
  ops_.push_back(op);
  if (op.kind == GateKind::Ancilla) live_ += op.count;
  if (op.kind == GateKind::TraceOut) live_ -= static_cast<int>(op.targets.size());
  return *this;
}

CircuitBuilder& CircuitBuilder::gate(GateKind kind, std::vector<int> targets) {
  return append(GateOp::fixed(kind, std::move(targets)));
}

CircuitBuilder& CircuitBuilder::unitary(Matrix m, std::vector<int> targets) {
  return append(GateOp::unitary(std::move(m), std::move(targets)));
}

CircuitBuilder& CircuitBuilder::controlled(int control, Matrix m, std::vector<int> targets) {
  return append(GateOp::controlled(control, std::move(m), std::move(targets)));
}

CircuitBuilder& CircuitBuilder::ancilla(int count, int* first_wire) {
  if (first_wire != nullptr) *first_wire = live_;
  return append(GateOp::ancilla(count));
}

CircuitBuilder& CircuitBuilder::trace_out(std::vector<int> wires) {
  return append(GateOp::trace_out(std::move(wires)));
}

CircuitBuilder& CircuitBuilder::keyed_pauli(int target, int x_bit, int z_bit, int control, bool inverse) {
  return append(GateOp::keyed_pauli(target, x_bit, z_bit, control, inverse));
}

MixedStateCircuit CircuitBuilder::build(std::optional<RegisterLayout> layout) const {
  return MixedStateCircuit(input_qubits_, ops_, std::nullopt, std::move(layout));
}

// ---------------------------------------------------------------------------
// canonical form

CanonicalCircuit canonicalize(const MixedStateCircuit& c) {
  if (c.has_placeholders()) throw DomainError("canonicalize: expand keyed placeholders with with_key() first");
  CanonicalCircuit out;
  out.input_qubits = c.input_qubits();
  out.ancilla_qubits = c.ancilla_qubits();
  out.output_qubits = c.output_qubits();
  const int total = out.total_qubits();
  require_capacity(total, "canonical circuit");

  std::vector<int> live(static_cast<std::size_t>(c.input_qubits()));
  std::iota(live.begin(), live.end(), 0);
  int next_physical = c.input_qubits();
  for (const auto& op : c.ops()) {
    switch (op.kind) {
      case GateKind::Ancilla:
        for (int k = 0; k < op.count; ++k) live.push_back(next_physical++);
        break;
      case GateKind::TraceOut: {
        std::vector<int> remove;
        for (int w : op.targets) {
          out.traced_wires.push_back(live[static_cast<std::size_t>(w)]);
          remove.push_back(live[static_cast<std::size_t>(w)]);
        }
        std::erase_if(live, [&](int p) { return std::find(remove.begin(), remove.end(), p) != remove.end(); });
        break;
      }
      default: {
        GateOp g = op;
        for (int& t : g.targets) t = live[static_cast<std::size_t>(t)];
        if (g.kind == GateKind::Controlled) g.control = live[static_cast<std::size_t>(g.control)];
        out.gates.push_back(std::move(g));
        break;
      }
    }
  }
  std::sort(out.traced_wires.begin(), out.traced_wires.end());

  out.unitary = Matrix::Identity(dim_of(total), dim_of(total));
  for (const auto& g : out.gates) {
    const auto w = g.wires();
    kernels::apply_gate_rows(out.unitary, total, g.local_matrix(), w);
  }
  return out;
}

CanonicalCircuit padded(const CanonicalCircuit& c, int extra) {
  if (extra < 0) throw DomainError("padding must be non-negative");
  CanonicalCircuit out = c;
  out.ancilla_qubits += extra;
  require_capacity(out.total_qubits(), "padded circuit");
  out.unitary = tensor(Matrix::Identity(dim_of(extra), dim_of(extra)), c.unitary);
  for (int k = 0; k < extra; ++k) out.traced_wires.push_back(c.total_qubits() + k);
  return out;
}

MixedStateCircuit to_circuit(const CanonicalCircuit& c) {
  CircuitBuilder b(c.input_qubits);
  if (c.ancilla_qubits > 0) b.ancilla(c.ancilla_qubits);
  std::vector<int> all(static_cast<std::size_t>(c.total_qubits()));
  std::iota(all.begin(), all.end(), 0);
  if (!all.empty()) b.unitary(c.unitary, all);
  if (!c.traced_wires.empty()) b.trace_out(c.traced_wires);
  return b.build();
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

void check_input(int circuit_inputs, const DensityOperator& rho, int reference_qubits) {
  if (reference_qubits < 0) throw DomainError("reference_qubits must be non-negative");
  if (rho.dim() != dim_of(circuit_inputs + reference_qubits)) {
    throw DimensionError("state has dimension " + std::to_string(rho.dim()) + ", circuit expects " +
                         std::to_string(circuit_inputs) + " input qubits plus " + std::to_string(reference_qubits) +
                         " reference qubits");
  }
}

DensityOperator finish(Matrix m) {
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityOperator(std::move(m));
}

std::vector<int> iota_wires(int n) {
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 0);
  return w;
}

}  // namespace

DensityOperator evaluate(const MixedStateCircuit& c, const DensityOperator& rho, int reference_qubits) {
  if (c.has_placeholders()) throw DomainError("evaluate: expand keyed placeholders with with_key() first");
  check_input(c.input_qubits(), rho, reference_qubits);
  require_capacity(c.peak_qubits() + reference_qubits, "evaluate");
  Matrix m = rho.matrix();
  int live = c.input_qubits();
  for (const auto& op : c.ops()) {
    const int n = live + reference_qubits;
    switch (op.kind) {
      case GateKind::Ancilla:
        m = kernels::insert_zero_qubits(m, n, live, op.count);
        live += op.count;
        break;
      case GateKind::TraceOut:
        m = kernels::partial_trace(m, n, op.targets);
        live -= static_cast<int>(op.targets.size());
        break;
      default: {
        const auto w = op.wires();
        kernels::conjugate(m, n, op.local_matrix(), w);
        break;
      }
    }
  }
  return finish(std::move(m));
}

DensityOperator evaluate(const CanonicalCircuit& c, const DensityOperator& rho, int reference_qubits) {
  check_input(c.input_qubits, rho, reference_qubits);
  require_capacity(c.total_qubits() + reference_qubits, "evaluate");
  Matrix m = kernels::insert_zero_qubits(rho.matrix(), c.input_qubits + reference_qubits, c.input_qubits,
                                         c.ancilla_qubits);
  const int n = c.total_qubits() + reference_qubits;
  if (c.total_qubits() > 0) kernels::conjugate(m, n, c.unitary, iota_wires(c.total_qubits()));
  if (!c.traced_wires.empty()) m = kernels::partial_trace(m, n, c.traced_wires);
  return finish(std::move(m));
}

Matrix evaluate_pure(const CanonicalCircuit& c, const Vector& psi, int reference_qubits) {
  if (psi.size() != dim_of(c.input_qubits + reference_qubits)) {
    throw DimensionError("pure input does not match circuit inputs plus reference");
  }
  require_capacity(c.total_qubits() + reference_qubits, "evaluate");
  Vector v = kernels::insert_zero_qubits(psi, c.input_qubits + reference_qubits, c.input_qubits, c.ancilla_qubits);
  const int n = c.total_qubits() + reference_qubits;
  if (c.total_qubits() > 0) kernels::apply_gate(v, n, c.unitary, iota_wires(c.total_qubits()));
  return kernels::partial_trace(v, n, c.traced_wires);
}

QuantumChannel to_channel(const CanonicalCircuit& c) {
  require_capacity(c.input_qubits + c.output_qubits, "Choi matrix");
  const PureState omega = PureState::maximally_entangled(c.input_qubits);
  Matrix choi = evaluate_pure(c, omega.amplitudes(), c.input_qubits);
  choi *= static_cast<double>(dim_of(c.input_qubits));
  choi = 0.5 * (choi + choi.adjoint()).eval();
  return QuantumChannel(c.input_qubits, c.output_qubits, std::move(choi));
}

QuantumChannel to_channel(const MixedStateCircuit& c) { return to_channel(canonicalize(c)); }

}  // namespace qct

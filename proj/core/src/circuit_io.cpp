#include "qct/circuit_io.hpp"

#include <algorithm>
#include <cmath>

namespace qct {
namespace {

std::string join(const std::string& path, const std::string& field) {
  return path.empty() ? field : path + "." + field;
}

const Json& require(const Json& obj, const std::string& path, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(join(path, field), "missing required field");
  return *it;
}

int require_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<int>();
}

std::vector<int> int_list(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(require_int(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

int expected_targets(GateKind kind) {
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

GateOp op_from_json(const Json& doc, const std::string& path) {
  if (!doc.is_object()) throw ParseError(path, "expected an object");
  const Json& kind_field = require(doc, path, "kind");
  if (!kind_field.is_string()) throw ParseError(join(path, "kind"), "expected a string");
  const auto name = kind_field.get<std::string>();
  const auto kind = gate_kind_from_name(name);
  if (!kind) throw UnsupportedGateError(join(path, "kind"), "unsupported gate kind '" + name + "'");

  GateOp op;
  op.kind = *kind;
  if (op.kind == GateKind::Ancilla) {
    op.count = require_int(require(doc, path, "count"), join(path, "count"));
    if (op.count < 1) throw ParseError(join(path, "count"), "must be >= 1");
    return op;
  }
  op.targets = int_list(require(doc, path, "targets"), join(path, "targets"));
  const int arity = expected_targets(op.kind);
  if (arity > 0 && static_cast<int>(op.targets.size()) != arity) {
    throw ParseError(join(path, "targets"), std::string(gate_name(op.kind)) + " expects " + std::to_string(arity) +
                                                " target(s), got " + std::to_string(op.targets.size()));
  }
  if (op.kind == GateKind::Unitary || op.kind == GateKind::Controlled) {
    op.matrix = matrix_from_json(require(doc, path, "matrix"), join(path, "matrix"));
    if (op.matrix.rows() != dim_of(static_cast<int>(op.targets.size()))) {
      throw ParseError(join(path, "matrix"), "size does not match the number of targets");
    }
  }
  if (op.kind == GateKind::Controlled) {
    op.control = require_int(require(doc, path, "control"), join(path, "control"));
  }
  if (op.kind == GateKind::KeyedPauli) {
    const auto bits = int_list(require(doc, path, "key_bits"), join(path, "key_bits"));
    if (bits.size() != 2) throw ParseError(join(path, "key_bits"), "expected [x_bit, z_bit]");
    op.key_bits = {bits[0], bits[1]};
    if (auto it = doc.find("control"); it != doc.end()) op.control = require_int(*it, join(path, "control"));
    if (auto it = doc.find("inverse"); it != doc.end()) {
      if (!it->is_boolean()) throw ParseError(join(path, "inverse"), "expected a boolean");
      op.inverse = it->get<bool>();
    }
  }
  return op;
}

OrderedJson op_to_json(const GateOp& op) {
  OrderedJson j;
  j["kind"] = std::string(gate_name(op.kind));
  if (op.kind == GateKind::Ancilla) {
    j["count"] = op.count;
    return j;
  }
  j["targets"] = op.targets;
  if (op.kind == GateKind::Controlled) j["control"] = op.control;
  if (op.kind == GateKind::Unitary || op.kind == GateKind::Controlled) j["matrix"] = matrix_to_json(op.matrix);
  if (op.kind == GateKind::KeyedPauli) {
    j["key_bits"] = {op.key_bits[0], op.key_bits[1]};
    if (op.control >= 0) j["control"] = op.control;
    if (op.inverse) j["inverse"] = true;
  }
  return j;
}

}  // namespace

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ParseError("line " + std::to_string(line), "malformed JSON");
  }
}

Matrix matrix_from_json(const Json& doc, const std::string& path) {
  if (!doc.is_array()) throw ParseError(path, "expected a row-major list of [re, im] pairs");
  const auto n = static_cast<Index>(doc.size());
  Index d = 0;
  while (d * d < n) ++d;
  if (d * d != n || d == 0) throw ParseError(path, "entry count " + std::to_string(n) + " is not a square");
  Matrix m(d, d);
  for (Index k = 0; k < n; ++k) {
    const Json& e = doc[static_cast<std::size_t>(k)];
    const std::string epath = path + "[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ParseError(epath, "expected [re, im]");
    }
    m(k / d, k % d) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

OrderedJson matrix_to_json(const Matrix& m) {
  OrderedJson out = OrderedJson::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

MixedStateCircuit circuit_from_json(const Json& doc, const std::string& path) {
  if (!doc.is_object()) throw ParseError(path.empty() ? "circuit" : path, "expected an object");
  const int inputs = require_int(require(doc, path, "input_qubits"), join(path, "input_qubits"));
  const int outputs = require_int(require(doc, path, "output_qubits"), join(path, "output_qubits"));
  const Json& ops_doc = require(doc, path, "ops");
  if (!ops_doc.is_array()) throw ParseError(join(path, "ops"), "expected an array");
  std::vector<GateOp> ops;
  for (std::size_t i = 0; i < ops_doc.size(); ++i) {
    ops.push_back(op_from_json(ops_doc[i], join(path, "ops[" + std::to_string(i) + "]")));
  }
  std::optional<RegisterLayout> layout;
  if (auto it = doc.find("layout"); it != doc.end()) {
    if (!it->is_array()) throw ParseError(join(path, "layout"), "expected an array");
    std::vector<RegisterLayout::Register> regs;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string rpath = join(path, "layout[" + std::to_string(i) + "]");
      const Json& r = (*it)[i];
      if (!r.is_object()) throw ParseError(rpath, "expected an object");
      const Json& name = require(r, rpath, "name");
      if (!name.is_string()) throw ParseError(join(rpath, "name"), "expected a string");
      regs.push_back({name.get<std::string>(), require_int(require(r, rpath, "qubits"), join(rpath, "qubits"))});
    }
    layout = RegisterLayout(std::move(regs));
  }
  try {
    return MixedStateCircuit(inputs, std::move(ops), outputs, std::move(layout));
  } catch (const ParseError&) {
    throw;
  } catch (const CapacityError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path.empty() ? "circuit" : path, e.what());
  }
}

OrderedJson circuit_to_json(const MixedStateCircuit& c) {
  OrderedJson j;
  j["input_qubits"] = c.input_qubits();
  j["output_qubits"] = c.output_qubits();
  if (c.layout()) {
    OrderedJson regs = OrderedJson::array();
    for (const auto& r : c.layout()->registers()) regs.push_back({{"name", r.name}, {"qubits", r.qubits}});
    j["layout"] = std::move(regs);
  }
  OrderedJson ops = OrderedJson::array();
  for (const auto& op : c.ops()) ops.push_back(op_to_json(op));
  j["ops"] = std::move(ops);
  return j;
}

MixedStateCircuit parse_circuit(std::string_view text) { return circuit_from_json(parse_json_text(text)); }

std::string serialize_circuit(const MixedStateCircuit& c) { return circuit_to_json(c).dump(2) + "\n"; }

}  // namespace qct

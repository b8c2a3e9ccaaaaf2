#pragma once

// JSON circuit documents:
//   {"input_qubits": n, "output_qubits": m, "ops": [...], optional "layout"}
// with ops {"kind": "H"|...|"unitary"|"controlled"|"ancilla"|"traceout"|"keyed_pauli",
//           "targets": [...], "matrix": [[re, im], ...] row-major,
//           "control": w, "count": k, "key_bits": [x, z], "inverse": bool}.

#include <string>
#include <string_view>

#include "json.hpp"
#include "qct/circuit.hpp"

namespace qct {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

MixedStateCircuit parse_circuit(std::string_view text);
std::string serialize_circuit(const MixedStateCircuit& c);

/// `path` prefixes field names in ParseError messages.
MixedStateCircuit circuit_from_json(const Json& doc, const std::string& path = "");
OrderedJson circuit_to_json(const MixedStateCircuit& c);

Matrix matrix_from_json(const Json& doc, const std::string& path);
OrderedJson matrix_to_json(const Matrix& m);

/// Parses text into JSON, reporting syntax errors as ParseError with a line number.
Json parse_json_text(std::string_view text);

}  // namespace qct

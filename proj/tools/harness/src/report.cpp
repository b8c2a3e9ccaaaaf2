#include <cstdio>
#include <string>

#include "qct/channel_algebra.hpp"
#include "qct/ct_reduction.hpp"
#include "qct/di_protocol.hpp"
#include "qct/harness.hpp"

namespace qct::harness {
namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::AtMost:
      return "at-most";
    case Relation::AtLeast:
      return "at-least";
    case Relation::Within:
      return "within";
  }
  return "?";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_csv(const std::vector<ReportRow>& rows) {
  // ms stays empty here so the body is reproducible; wall times go to the metadata file.
  std::string out = "experiment,claim,measured,bound,pass,ms\n";
  for (const auto& r : rows) {
    out += csv_field(r.experiment) + "," + csv_field(r.claim) + "," + number(r.measured) + "," + number(r.bound) + "," +
           (r.pass ? "true" : "false") + ",\n";
  }
  return out;
}

std::string format_json(const ExperimentConfig& config, const std::vector<ReportRow>& rows) {
  OrderedJson j;
  j["experiment"] = config.experiment;
  j["seed"] = config.seed;
  j["params"] = OrderedJson::parse(config.params.dump());
  OrderedJson arr = OrderedJson::array();
  bool all = true;
  for (const auto& r : rows) {
    OrderedJson row;
    row["experiment"] = r.experiment;
    row["claim"] = r.claim;
    row["measured"] = r.measured;
    row["bound"] = r.bound;
    row["relation"] = std::string(relation_name(r.relation));
    if (r.relation == Relation::Within) row["tolerance"] = r.tolerance;
    row["pass"] = r.pass;
    arr.push_back(std::move(row));
    all = all && r.pass;
  }
  j["rows"] = std::move(arr);
  j["all_pass"] = all;
  return j.dump(2) + "\n";
}

std::string format_report(const ExperimentConfig& config, const std::vector<ReportRow>& rows) {
  return config.format == Format::Csv ? format_csv(rows) : format_json(config, rows);
}

std::string format_metadata(const std::vector<ReportRow>& rows, const std::string& started_utc,
                            const std::string& finished_utc, double total_ms) {
  OrderedJson j;
  j["started_utc"] = started_utc;
  j["finished_utc"] = finished_utc;
  j["total_ms"] = total_ms;
  OrderedJson arr = OrderedJson::array();
  for (const auto& r : rows) arr.push_back({{"experiment", r.experiment}, {"claim", r.claim}, {"ms", r.ms}});
  j["rows"] = std::move(arr);
  return j.dump(2) + "\n";
}

OrderedJson fixture_catalog() {
  OrderedJson cat;
  OrderedJson verifiers = OrderedJson::array();
  verifiers.push_back({{"kind", "always_reject"}, {"params", {{"witness_qubits", "h >= 1"}}}, {"p_star", "0"}});
  verifiers.push_back({{"kind", "target_state"},
                       {"params", {{"witness_qubits", "h >= 1"}, {"target", "unit vector, default |1...1>"}}},
                       {"p_star", "1"}});
  verifiers.push_back({{"kind", "rotation"}, {"params", {{"theta", "radians"}}}, {"p_star", "sin^2(theta/2)"}});
  verifiers.push_back({{"kind", "random_unitary"},
                       {"params", {{"witness_qubits", "h >= 1"}, {"ancilla_qubits", "a >= 0"}, {"seed", "uint64"}}},
                       {"p_star", "top eigenvalue of the acceptance operator"}});
  cat["verifiers"] = std::move(verifiers);
  cat["verifier_schema"] = {{"witness_qubits", "int"}, {"ancilla_qubits", "int"}, {"circuit", "circuit"},
                            {"output_qubit", "int, default 0"}};

  OrderedJson families = OrderedJson::array();
  for (const auto& name : family_names()) {
    OrderedJson f{{"name", name}};
    if (name == "pauli_keyed") f["params"] = {{"key", "0 <= key < 4^width"}};
    families.push_back(std::move(f));
  }
  cat["circuit_families"] = std::move(families);
  cat["keyed_families"] = OrderedJson::array({
      {{"name", "pauli_keyed"}, {"key_bits", "2n"}, {"example", family_to_json(pauli_keyed_family(1))}},
      {{"name", "pauli_decrypt"}, {"key_bits", "2n"}},
      {{"name", "key_ignoring"}, {"key_bits", "m"}},
  });

  cat["circuit_schema"] = {
      {"input_qubits", "int"},
      {"output_qubits", "int"},
      {"layout", "optional [{name, qubits}], leftmost register most significant"},
      {"ops", "[{kind, targets, ...}]; kinds H S T X Y Z CNOT CCNOT unitary controlled ancilla traceout keyed_pauli"}};
  cat["instances"] = OrderedJson::array({
      {{"name", "ct_instance"},
       {"fields", {"circuit", "c0", "c1", "eps", "delta", "witness_qubits", "dummy_qubits", "ancilla_qubits", "layout",
                   "traced_wires"}}},
      {{"name", "di_secure_otp"}, {"fields", {"key_bits", "template", "eps", "delta", "provenance"}}},
      {{"name", "di_insecure_from_verifier"}, {"fields", {"key_bits", "template", "eps", "delta", "provenance"}}},
  });
  return cat;
}

std::vector<BundledFile> bundled_files() {
  std::vector<BundledFile> out;
  auto add = [&](std::string name, const OrderedJson& j) { out.push_back({std::move(name), j.dump(2) + "\n"}); };
  auto circuit = [&](std::string name, const MixedStateCircuit& c) { out.push_back({std::move(name), serialize_circuit(c)}); };

  circuit("identity.json", CircuitBuilder(1).build());
  circuit("x_gate.json", CircuitBuilder(1).x(0).build());
  circuit("depolarizer.json", depolarizing_circuit(1, 1));
  int anc = 0;
  circuit("ancilla_cnot.json", CircuitBuilder(1).ancilla(1, &anc).cnot(0, anc).trace_out({0}).build());
  circuit("bell_pair.json", CircuitBuilder(0).ancilla(2).h(0).cnot(0, 1).build());
  circuit("pauli_keyed_template_2q.json", pauli_keyed_family(2).template_circuit());

  const auto rotation = rotation_verifier(0.96);
  add("rotation_verifier.json", verifier_to_json(rotation));
  add("ct_rotation_identity_vs_omega.json",
      ct_instance_to_json(build_ct_circuit(rotation, identity_family(), depolarizing_family(), 0.04, 0.5)));
  add("di_secure_otp_1q.json", instance_to_json(build_secure_instance(1, 0.0)));
  return out;
}

}  // namespace qct::harness

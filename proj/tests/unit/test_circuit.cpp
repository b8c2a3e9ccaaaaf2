#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qct/channel_algebra.hpp"
#include "qct/circuit.hpp"
#include "qct/circuit_io.hpp"

using namespace qct;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Exercises every op kind: mid-circuit ancilla, controlled block, trace.
MixedStateCircuit mixed_example(std::uint64_t seed) {
  oracle::Gen g(seed);
  int anc = 0;
  return CircuitBuilder(2)
      .h(0)
      .ancilla(1, &anc)
      .cnot(0, anc)
      .controlled(anc, g.unitary(2), {1})
      .gate(GateKind::T, {1})
      .trace_out({0})
      .gate(GateKind::S, {0})
      .unitary(g.unitary(4), {0, 1})
      .build();
}

}  // namespace

TEST(Evaluate, IdentityAndX) {
  oracle::Gen g(1);
  const DensityOperator rho(g.density(2));
  const auto id = CircuitBuilder(1).build();
  EXPECT_LT(max_abs(evaluate(id, rho).matrix() - rho.matrix()), 1e-12);
  const auto x = CircuitBuilder(1).x(0).build();
  const auto out = evaluate(x, DensityOperator::from_pure(PureState::zero(1)));
  EXPECT_NEAR(out.matrix()(1, 1).real(), 1.0, 1e-15);
}

TEST(Evaluate, DepolarizerCircuitGivesMaximallyMixed) {
  const auto c = depolarizing_circuit(1, 1);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto out = evaluate(c, DensityOperator::from_pure(random_pure_state(2, s)));
    EXPECT_LT(max_abs(out.matrix() - Matrix::Identity(2, 2) / 2.0), 1e-9);
  }
}

TEST(Evaluate, ReferenceIsUntouched) {
  // X on the low qubit of a Bell pair: (X ⊗ I)|Phi+> on (R, H) ordering.
  const auto bell = DensityOperator::from_pure(PureState::maximally_entangled(1));
  const auto out = evaluate(CircuitBuilder(1).x(0).build(), bell, 1);
  const Matrix expected = oracle::kron(oracle::pauli_i(), oracle::pauli_x()) * bell.matrix() *
                          oracle::kron(oracle::pauli_i(), oracle::pauli_x());
  EXPECT_LT(max_abs(out.matrix() - expected), 1e-12);
}

TEST(Evaluate, RejectsWrongDimension) {
  EXPECT_THROW(evaluate(CircuitBuilder(2).build(), DensityOperator::maximally_mixed(1)), DimensionError);
}

TEST(ToChannel, IdentityChoiIsUnnormalizedBell) {
  const auto ch = to_channel(CircuitBuilder(1).build());
  const Matrix bell = PureState::maximally_entangled(1).projector();
  EXPECT_LT(max_abs(ch.choi() - 2.0 * bell), 1e-12);
}

TEST(ToChannel, DepolarizerChoi) {
  const auto ch = to_channel(depolarizing_circuit(1, 1));
  EXPECT_LT(max_abs(ch.choi() - Matrix::Identity(4, 4) / 2.0), 1e-9);
}

TEST(ToChannel, AgreesWithEvaluate) {
  const auto c = mixed_example(3);
  const auto ch = to_channel(c);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho = random_density(4, 4, s);
    EXPECT_LT(max_abs(ch.apply(rho).matrix() - evaluate(c, rho).matrix()), 1e-9);
  }
}

TEST(Canonicalize, NoAncillasKeepsUnitary) {
  oracle::Gen g(4);
  const Matrix u = g.unitary(4);
  const auto can = canonicalize(CircuitBuilder(2).unitary(u, {0, 1}).build());
  EXPECT_EQ(can.ancilla_qubits, 0);
  EXPECT_TRUE(can.traced_wires.empty());
  EXPECT_LT(max_abs(can.unitary - u), 1e-12);
}

TEST(Canonicalize, HoistsMidCircuitAncilla) {
  int anc = 0;
  const auto c = CircuitBuilder(1).h(0).ancilla(1, &anc).cnot(0, anc).trace_out({0}).build();
  const auto can = canonicalize(c);
  EXPECT_EQ(can.ancilla_qubits, 1);
  EXPECT_EQ(can.traced_wires.size(), 1u);
  EXPECT_EQ(can.output_qubits, 1);
  // Basis-input oracle: H then copy then discard the original gives the
  // dephased |+> or |-> statistics, i.e. I/2 for both inputs.
  for (Index b = 0; b < 2; ++b) {
    const auto in = DensityOperator::from_pure(PureState::basis(2, b));
    EXPECT_LT(max_abs(evaluate(can, in).matrix() - Matrix::Identity(2, 2) / 2.0), 1e-12);
    EXPECT_LT(max_abs(evaluate(c, in).matrix() - evaluate(can, in).matrix()), 1e-12);
  }
}

TEST(Canonicalize, PreservesChannelOnRandomStates) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = mixed_example(seed);
    const auto can = canonicalize(c);
    EXPECT_LT(max_abs(to_channel(c).choi() - to_channel(can).choi()), 1e-9);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto rho = random_density(4, 1 + static_cast<Index>(s % 4), 1000 * seed + s);
      EXPECT_LT(max_abs(evaluate(c, rho).matrix() - evaluate(can, rho).matrix()), 1e-9);
    }
    // Round trip back to a circuit.
    EXPECT_LT(max_abs(to_channel(to_circuit(can)).choi() - to_channel(c).choi()), 1e-9);
  }
}

TEST(Canonicalize, DepolarizerChannelUnchanged) {
  const auto c = depolarizing_circuit(2, 2);
  EXPECT_LT(max_abs(to_channel(canonicalize(c)).choi() - to_channel(c).choi()), 1e-9);
}

TEST(Canonicalize, PaddingLeavesChannelUnchanged) {
  const auto can = canonicalize(mixed_example(8));
  for (int extra : {0, 1, 3}) {
    const auto p = padded(can, extra);
    EXPECT_EQ(p.ancilla_qubits, can.ancilla_qubits + extra);
    EXPECT_LT(max_abs(to_channel(p).choi() - to_channel(can).choi()), 1e-9);
  }
}

TEST(Canonicalize, UnitaryMatchesGateProduct) {
  const auto can = canonicalize(mixed_example(2));
  EXPECT_LT(max_abs(can.unitary.adjoint() * can.unitary - Matrix::Identity(can.unitary.rows(), can.unitary.rows())),
            1e-10);
  // Outputs and traced wires partition the post-unitary register.
  EXPECT_EQ(can.output_qubits + static_cast<int>(can.traced_wires.size()), can.total_qubits());
}

TEST(EvaluatePure, MatchesDensityPath) {
  const auto c = mixed_example(5);
  const auto can = canonicalize(c);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto psi = random_pure_state(8, s);  // one reference qubit
    const Matrix viapure = evaluate_pure(can, psi.amplitudes(), 1);
    const auto viadense = evaluate(c, DensityOperator::from_pure(psi), 1);
    EXPECT_LT(max_abs(viapure - viadense.matrix()), 1e-10);
  }
}

TEST(Evaluate, LinearityAndTracePreservation) {
  const auto c = mixed_example(6);
  oracle::Gen g(6);
  for (int t = 0; t < 10; ++t) {
    const Matrix rho = g.density(4);
    const Matrix sigma = g.density(4);
    for (double a : {0.0, 0.3, 1.0}) {
      const Matrix mix = a * rho + (1 - a) * sigma;
      const Matrix lhs = evaluate(c, DensityOperator(mix)).matrix();
      const Matrix rhs = a * evaluate(c, DensityOperator(rho)).matrix() +
                         (1 - a) * evaluate(c, DensityOperator(sigma)).matrix();
      EXPECT_LT(max_abs(lhs - rhs), 1e-9);
      EXPECT_NEAR(lhs.trace().real(), 1.0, 1e-9);
    }
  }
}

TEST(CircuitValidation, RejectsDeadWiresAndBadShapes) {
  EXPECT_THROW(CircuitBuilder(1).cnot(0, 1).build(), DimensionError);
  EXPECT_THROW(CircuitBuilder(2).trace_out({0}).x(1).build(), DimensionError);
  EXPECT_THROW(MixedStateCircuit(1, {GateOp::fixed(GateKind::X, {0})}, 2), DimensionError);
  Matrix notu = Matrix::Identity(2, 2);
  notu(0, 0) = 2.0;
  EXPECT_THROW(CircuitBuilder(1).unitary(notu, {0}).build(), InvalidStateError);
  EXPECT_THROW(CircuitBuilder(1).gate(GateKind::CNOT, {0}).build(), DomainError);
}

TEST(CircuitValidation, LiveWireBookkeeping) {
  int anc = 0;
  const auto c = CircuitBuilder(2).ancilla(3, &anc).trace_out({0, 4}).build();
  EXPECT_EQ(anc, 2);
  EXPECT_EQ(c.output_qubits(), 3);
  EXPECT_EQ(c.peak_qubits(), 5);
  EXPECT_EQ(c.ancilla_qubits(), 3);
}

TEST(CircuitCompose, ThenMatchesChannelComposition) {
  const auto a = mixed_example(1);
  const auto b = mixed_example(2);
  const auto both = a.then(b);
  const QuantumChannel expected = to_channel(a).then(to_channel(b));
  EXPECT_LT(max_abs(to_channel(both).choi() - expected.choi()), 1e-9);
}

TEST(KeyedPlaceholders, ExpandPerKey) {
  const auto t = CircuitBuilder(1).keyed_pauli(0, 0, 1).build();
  EXPECT_TRUE(t.has_placeholders());
  EXPECT_EQ(t.placeholder_key_bits(), 2);
  EXPECT_THROW(to_channel(t), DomainError);
  const Matrix paulis[4] = {oracle::pauli_i(), oracle::pauli_x(), oracle::pauli_z(), oracle::pauli_x() * oracle::pauli_z()};
  for (std::uint64_t k = 0; k < 4; ++k) {
    const auto c = t.with_key(k);
    EXPECT_FALSE(c.has_placeholders());
    const Matrix u = canonicalize(c).unitary;
    EXPECT_LT(max_abs(u - paulis[k]), 1e-12) << "key " << k;
  }
}

TEST(CircuitIo, BundledFilesRoundTrip) {
  const std::filesystem::path dir = std::filesystem::path(QCT_SOURCE_DIR) / "data" / "circuits";
  int seen = 0;
  for (const char* name : {"identity", "x_gate", "depolarizer", "ancilla_cnot", "bell_pair", "pauli_keyed_template_2q"}) {
    const std::string text = slurp(dir / (std::string(name) + ".json"));
    ASSERT_FALSE(text.empty()) << name;
    const auto c = parse_circuit(text);
    EXPECT_EQ(Json::parse(serialize_circuit(c)), Json::parse(text)) << name;
    ++seen;
  }
  EXPECT_EQ(seen, 6);
}

TEST(CircuitIo, RoundTripPreservesChannel) {
  const auto c = mixed_example(9);
  const auto back = parse_circuit(serialize_circuit(c));
  EXPECT_LT(max_abs(to_channel(back).choi() - to_channel(c).choi()), 1e-12);
}

TEST(CircuitIo, ErrorsNameTheOffendingOp) {
  try {
    parse_circuit(R"({"input_qubits": 2, "output_qubits": 2, "ops": [{"kind": "H", "targets": [0]}, {"kind": "CNOT", "targets": [0]}]})");
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.path(), "ops[1].targets");
  }
  try {
    parse_circuit(R"({"input_qubits": 1, "output_qubits": 1, "ops": [{"kind": "FOO", "targets": [0]}]})");
    ADD_FAILURE();
  } catch (const UnsupportedGateError& e) {
    EXPECT_EQ(e.path(), "ops[0].kind");
  }
  try {
    parse_circuit("{\n  \"input_qubits\": 1,\n  \"ops\": [\n}");
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.path().rfind("line ", 0), 0u) << e.path();
  }
  EXPECT_THROW(parse_circuit(R"({"input_qubits": 1, "output_qubits": 2, "ops": []})"), ParseError);
  EXPECT_THROW(parse_circuit(R"({"output_qubits": 1, "ops": []})"), ParseError);
}

TEST(CircuitIo, UnitaryMatrixEncoding) {
  oracle::Gen g(12);
  const Matrix u = g.unitary(2);
  EXPECT_LT(max_abs(matrix_from_json(Json::parse(matrix_to_json(u).dump()), "m") - u), 0.0 + 1e-16);
}

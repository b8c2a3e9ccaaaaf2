#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qct/ct_reduction.hpp"

using namespace qct;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

VerifierCircuit target_verifier(int h = 1) {
  ToyVerifierSpec s;
  s.kind = "target_state";
  s.witness_qubits = h;
  return make_toy_verifier(s);
}

VerifierCircuit always_reject(int h = 1) {
  ToyVerifierSpec s;
  s.kind = "always_reject";
  s.witness_qubits = h;
  return make_toy_verifier(s);
}

// |phi'> by hand: run V on |psi, 0>, then put a fresh copy qubit on top that
// equals the output bit.
Vector phi_prime_oracle(const VerifierCircuit& v, const Vector& psi) {
  Vector in = Vector::Zero(dim_of(v.total_qubits()));
  in.head(psi.size()) = psi;
  const Vector phi = v.unitary() * in;
  Vector out = Vector::Zero(2 * phi.size());
  for (Index x = 0; x < phi.size(); ++x) {
    const Index bit = (x >> v.output_qubit()) & 1;
    out(bit * phi.size() + x) = phi(x);
  }
  return out;
}

}  // namespace

TEST(DummyQubits, Formula) {
  EXPECT_EQ(dummy_qubits(1, 1.0), 0);
  EXPECT_EQ(dummy_qubits(1, 0.5), 1);
  EXPECT_EQ(dummy_qubits(2, 0.5), 2);
  EXPECT_EQ(dummy_qubits(1, 1.0 / 3.0), 2);
  EXPECT_EQ(dummy_qubits(3, 0.75), 1);
  EXPECT_THROW(dummy_qubits(1, 0.0), DomainError);
  EXPECT_THROW(dummy_qubits(1, 1.5), DomainError);
}

TEST(BuildCtCircuit, DeltaOneHasNoDummyRegister) {
  const auto inst = build_ct_circuit(rotation_verifier(0.96), identity_family(), depolarizing_family(), 0.04, 1.0);
  EXPECT_EQ(inst.dummy_qubits, 0);
  EXPECT_EQ(inst.circuit.input_qubits(), 1);
  EXPECT_EQ(inst.circuit.output_qubits(), 1);
}

TEST(BuildCtCircuit, QubitAccountingIsLinear) {
  for (int h : {1, 2}) {
    for (double delta : {1.0, 0.5}) {
      const auto v = target_verifier(h);
      const int f = static_cast<int>(std::ceil(h * (1 - delta) / delta - 1e-12));
      const int anc = std::max(v.ancilla_qubits(), 2 * (h + f));
      if (h + f + anc + 1 > max_qubits()) {
        // h=2, delta=1/2 lands one qubit over the default cap.
        try {
          build_ct_circuit(v, identity_family(), depolarizing_family(), 0.0, delta);
          ADD_FAILURE() << "expected CapacityError";
        } catch (const CapacityError& e) {
          EXPECT_EQ(e.required_qubits(), h + f + anc + 1);
        }
        continue;
      }
      const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.0, delta);
      EXPECT_EQ(inst.dummy_qubits, f);
      EXPECT_EQ(inst.circuit.input_qubits(), h + f);
      EXPECT_EQ(inst.total_qubits(), h + f + inst.ancilla_qubits + 1);
      EXPECT_EQ(inst.layout.total_qubits(), inst.total_qubits());
      EXPECT_EQ(inst.layout.offset("H"), 0);
      EXPECT_EQ(inst.layout.qubits("copy"), 1);
      // The ancilla register is big enough for V and the depolarizer's two ancillas per qubit.
      EXPECT_EQ(inst.ancilla_qubits, anc);
    }
  }
}

TEST(BuildCtCircuit, CapacityErrorForTinyDelta) {
  try {
    build_ct_circuit(target_verifier(), identity_family(), depolarizing_family(), 0.0, 0.05);
    ADD_FAILURE();
  } catch (const CapacityError& e) {
    EXPECT_GT(e.required_qubits(), e.cap());
  }
}

TEST(CopyDistortion, ClosedFormValues) {
  auto b = copy_distortion_bounds(0.0);
  EXPECT_NEAR(b.yes_side, 2.0, 1e-15);
  EXPECT_NEAR(b.no_side, 0.0, 1e-15);
  b = copy_distortion_bounds(1.0);
  EXPECT_NEAR(b.yes_side, 0.0, 1e-15);
  EXPECT_NEAR(b.no_side, 2.0, 1e-15);
  b = copy_distortion_bounds(0.5);
  EXPECT_NEAR(b.yes_side, std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(b.no_side, std::sqrt(3.0), 1e-12);
  EXPECT_THROW(copy_distortion_bounds(-0.1), DomainError);
  EXPECT_THROW(copy_distortion_bounds(1.1), DomainError);
}

TEST(CopyStage, StateLevelDistancesMatchClosedForms) {
  for (int i = 1; i <= 10; ++i) {
    const double p = (i - 0.5) / 10.0;
    const auto v = rotation_verifier(p);
    const Vector psi = PureState::basis(2, 1).amplitudes();
    const auto cs = copy_stage(v, psi);
    EXPECT_NEAR(cs.accept_probability, p, 1e-12);
    EXPECT_LT((cs.phi_prime - phi_prime_oracle(v, psi)).cwiseAbs().maxCoeff(), 1e-12);
    const double to_zero = pure_state_distance(cs.phi_prime, cs.copy_zero);
    const double to_one = pure_state_distance(cs.phi_prime, cs.copy_one);
    EXPECT_NEAR(to_zero, 2.0 * std::sqrt(1.0 - (1.0 - p) * (1.0 - p)), 1e-9);
    EXPECT_NEAR(to_one, 2.0 * std::sqrt(1.0 - p * p), 1e-9);
    // Cross-check against the eigenvalue oracle for the difference of projectors.
    EXPECT_NEAR(to_one, oracle::hermitian_trace_norm(oracle::projector(cs.phi_prime) - oracle::projector(cs.copy_one)),
                1e-9);
    EXPECT_LT(to_zero, 3.0 * std::sqrt(p));
    EXPECT_LT(to_one, 3.0 * std::sqrt(1.0 - p));
  }
}

TEST(CopyStage, RandomVerifierWithReference) {
  ToyVerifierSpec s;
  s.kind = "random_unitary";
  s.witness_qubits = 1;
  s.seed = 5;
  const auto v = make_toy_verifier(s);
  const auto psi = random_pure_state(4, 1);  // one reference qubit
  const auto cs = copy_stage(v, psi.amplitudes(), 1);
  const double p = cs.accept_probability;
  EXPECT_NEAR(pure_state_distance(cs.phi_prime, cs.copy_one), 2.0 * std::sqrt(1.0 - p * p), 1e-9);
  EXPECT_NEAR(pure_state_distance(cs.phi_prime, cs.copy_zero), 2.0 * std::sqrt(1.0 - (1 - p) * (1 - p)), 1e-9);
}

TEST(BranchCorrectness, AcceptedWitnessFollowsC0RejectedFollowsC1) {
  for (double delta : {1.0, 0.5}) {
    const auto v = target_verifier();
    const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.0, delta);
    const int f = inst.dummy_qubits;
    const Index df = dim_of(f);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Matrix xi = random_density(df, df, s).matrix();
      const Matrix yes = oracle::kron(xi, PureState::basis(2, 1).projector());
      const Matrix no = oracle::kron(xi, PureState::basis(2, 0).projector());
      const int n = inst.input_qubits();
      EXPECT_LT(max_abs(evaluate(inst.circuit, DensityOperator(yes)).matrix() -
                        evaluate(inst.c0.at(n), DensityOperator(yes)).matrix()),
                1e-9);
      EXPECT_LT(max_abs(evaluate(inst.circuit, DensityOperator(no)).matrix() -
                        evaluate(inst.c1.at(n), DensityOperator(no)).matrix()),
                1e-9);
    }
  }
}

TEST(BranchCorrectness, SwappedFamiliesSwapBranches) {
  const auto v = target_verifier();
  const auto inst = build_ct_circuit(v, pauli_x_first_family(), identity_family(), 0.0, 1.0);
  const auto out = evaluate(inst.circuit, DensityOperator::from_pure(PureState::basis(2, 1)));
  EXPECT_NEAR(out.matrix()(0, 0).real(), 1.0, 1e-12);  // X applied to the accepted |1>
  const auto out0 = evaluate(inst.circuit, DensityOperator::from_pure(PureState::basis(2, 0)));
  EXPECT_NEAR(out0.matrix()(0, 0).real(), 1.0, 1e-12);  // identity on the rejected |0>
}

TEST(CertifyYes, TargetStateIsExact) {
  const auto v = target_verifier();
  const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.0, 0.5);
  const auto cert = certify_yes(inst, v, 3);
  EXPECT_TRUE(cert.passed);
  EXPECT_LE(cert.measured_bound, 1e-9);
  EXPECT_GE(cert.probes.size(), 3u);
  EXPECT_TRUE(cert.dimension_ok);
}

TEST(CertifyYes, RotationVerifierWithinBudget) {
  for (double delta : {1.0, 0.5}) {
    const auto v = rotation_verifier(0.96);
    const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.04, delta);
    const auto cert = certify_yes(inst, v, 11);
    EXPECT_NEAR(cert.claimed_bound, 0.6, 1e-12);
    EXPECT_LE(cert.measured_bound, 0.6);
    EXPECT_TRUE(cert.passed);
    EXPECT_GE(std::ldexp(1.0, cert.subspace_qubits_achieved), std::exp2(cert.subspace_qubits_required) - 1e-9);
  }
}

TEST(CertifyYes, DummyRegisterIsIgnored) {
  const auto v = rotation_verifier(0.96);
  const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.04, 0.5);
  const auto cert = certify_yes(inst, v, 1);
  double d0 = -1, d1 = -1, dr = -1;
  for (const auto& p : cert.probes) {
    if (p.label == "product xi=|0>") d0 = p.distance;
    if (p.label == "product xi=|1>") d1 = p.distance;
    if (p.label == "product xi=random") dr = p.distance;
  }
  ASSERT_GE(d0, 0.0);
  EXPECT_NEAR(d0, d1, 1e-9);
  EXPECT_NEAR(d0, dr, 1e-9);
}

TEST(CertifyYes, FullCircuitDoesNotExceedCopyStageDistance) {
  const double p = 0.96;
  const auto v = rotation_verifier(p);
  const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.04, 1.0);
  const auto rho = DensityOperator::from_pure(PureState::basis(2, 1));
  const double full =
      trace_norm(evaluate(inst.circuit, rho).matrix() - evaluate(inst.c0.at(1), rho).matrix());
  const auto cs = copy_stage(v, PureState::basis(2, 1).amplitudes());
  EXPECT_LE(full, pure_state_distance(cs.phi_prime, cs.copy_one) + 1e-9);
}

TEST(CertifyYes, WrongSide) {
  const auto v = always_reject();
  const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.04, 1.0);
  EXPECT_THROW(certify_yes(inst, v), WrongSideError);
}

TEST(CertifyNo, AlwaysRejectIsExact) {
  const auto v = always_reject();
  for (auto c1 : {depolarizing_family(), pauli_x_first_family()}) {
    const auto inst = build_ct_circuit(v, identity_family(), c1, 0.04, 1.0);
    const auto cert = certify_no(inst, v, 5, 2, 50);
    EXPECT_EQ(cert.probes.size(), 50u);
    for (const auto& pr : cert.probes) EXPECT_LE(pr.distance, 1e-9);
    EXPECT_LE(cert.diamond_lower_bound, 1e-9);
    EXPECT_TRUE(cert.heuristic);
  }
}

TEST(CertifyNo, RotationVerifierWithinBudget) {
  const auto v = rotation_verifier(0.04);
  const auto inst = build_ct_circuit(v, identity_family(), depolarizing_family(), 0.04, 1.0);
  const auto cert = certify_no(inst, v, 20, 4, 50);
  EXPECT_TRUE(cert.passed);
  EXPECT_LE(cert.diamond_lower_bound, 0.6 + 1e-6);
  for (const auto& pr : cert.probes) EXPECT_LE(pr.distance, 0.6 + 1e-9);
}

TEST(CertifyNo, IdentityBothBranchesStaysNearIdentity) {
  const auto v = rotation_verifier(0.04);
  const auto inst = build_ct_circuit(v, identity_family(), identity_family(), 0.04, 1.0);
  const auto cert = certify_no(inst, v, 10, 4, 20);
  // Both branches are the identity; only the copy disturbance remains.
  EXPECT_LE(cert.measured_bound, copy_distortion_bounds(0.04).no_side + 1e-9);
  EXPECT_THROW(certify_no(inst, rotation_verifier(0.5)), WrongSideError);
}

TEST(Wellformedness, IdentityVersusDepolarizing) {
  const auto r = wellformedness_check(identity_family(), depolarizing_family(), 0.1, 1.0, 1, 50, 1);
  EXPECT_NEAR(r.min_distance, 1.0, 1e-9);  // pure in, I/2 out
  EXPECT_FALSE(r.suspect);
  EXPECT_TRUE(r.subspace_clause_checked);
}

TEST(Wellformedness, EqualFamiliesFlagged) {
  const auto r = wellformedness_check(identity_family(), identity_family(), 0.1, 1.0, 1, 10, 1);
  EXPECT_NEAR(r.min_distance, 0.0, 1e-12);
  EXPECT_TRUE(r.suspect);
}

TEST(Wellformedness, PauliXAgreesWithIdentityOnPlus) {
  const auto r = wellformedness_check(identity_family(), pauli_x_first_family(), 0.1, 0.5, 1, 10, 1);
  EXPECT_EQ(r.min_probe, "plus");
  EXPECT_NEAR(r.min_distance, 0.0, 1e-12);
  EXPECT_TRUE(r.suspect);
  EXPECT_FALSE(r.subspace_clause_checked);
}

TEST(CtInstanceJson, RoundTripAndBundledFile) {
  const auto inst = build_ct_circuit(rotation_verifier(0.96), identity_family(), depolarizing_family(), 0.04, 0.5);
  const auto back = ct_instance_from_json(Json::parse(ct_instance_to_json(inst).dump()));
  EXPECT_EQ(back.dummy_qubits, inst.dummy_qubits);
  EXPECT_EQ(back.traced_wires, inst.traced_wires);
  EXPECT_EQ(back.c1.name, "depolarizing");
  EXPECT_LT(max_abs(to_channel(back.circuit).choi() - to_channel(inst.circuit).choi()), 1e-12);

  std::ifstream in(std::filesystem::path(QCT_SOURCE_DIR) / "data" / "circuits" / "ct_rotation_identity_vs_omega.json");
  std::stringstream text;
  text << in.rdbuf();
  const auto bundled = ct_instance_from_json(Json::parse(text.str()));
  EXPECT_EQ(bundled.circuit.output_qubits(), bundled.input_qubits());
  const auto r = wellformedness_check(bundled.c0, bundled.c1, bundled.eps, 1.0, bundled.input_qubits(), 10, 0);
  EXPECT_FALSE(r.suspect);
}

TEST(FamilyRegistry, NamesAndParams) {
  for (const auto& name : family_names()) {
    const Json params = name == "pauli_keyed" ? Json{{"key", 1}} : Json::object();
    const auto fam = family_by_name(name, params);
    EXPECT_EQ(fam.name, name);
    EXPECT_EQ(fam.at(2).input_qubits(), 2);
  }
  EXPECT_THROW(family_by_name("bogus"), DomainError);
  EXPECT_THROW(family_by_name("pauli_keyed"), DomainError);
}

TEST(KeyedTemplate, MatchesPerKeyInstances) {
  const auto v = target_verifier();
  const auto tmpl = build_ct_keyed_template(v, identity_family(), 1.0);
  EXPECT_EQ(tmpl.placeholder_key_bits(), 2);
  for (std::uint64_t k = 0; k < 4; ++k) {
    const auto direct = build_ct_circuit(v, identity_family(), pauli_keyed_member(k), 0.0, 1.0);
    EXPECT_LT(max_abs(to_channel(tmpl.with_key(k)).choi() - to_channel(direct.circuit).choi()), 1e-9) << k;
  }
}

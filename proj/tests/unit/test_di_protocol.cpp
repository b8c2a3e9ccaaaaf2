#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qct/di_protocol.hpp"

using namespace qct;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

DIInstance identity_instance(int n) {
  return make_instance(key_ignoring_family(n, 2 * n), 0.0, 1.0, Provenance::Custom);
}

VerifierCircuit target_verifier() {
  ToyVerifierSpec s;
  s.kind = "target_state";
  return make_toy_verifier(s);
}

// Swap-test acceptance from the explicit projector, with the first factor high.
double projector_accept(const Matrix& rho, Index d) {
  Matrix w = Matrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) w(b * d + a, a * d + b) = 1.0;
  return (0.5 * (Matrix::Identity(d * d, d * d) + w) * rho).trace().real();
}

}  // namespace

TEST(SwapTest, ProjectorInvariants) {
  for (Index d : {2, 4, 8}) {
    const Matrix p = build_swap_test(d).projector();
    EXPECT_LT(max_abs(p * p - p), 1e-12);
    EXPECT_NEAR(p.trace().real(), static_cast<double>(d * (d + 1)) / 2.0, 1e-12);
  }
  EXPECT_NEAR(build_swap_test(2).projector().trace().real(), 3.0, 1e-12);
}

TEST(SwapTest, PurePairLaw) {
  oracle::Gen g(1);
  for (Index d : {2, 4}) {
    const SwapTest st(d);
    for (int t = 0; t < 20; ++t) {
      const Vector a = g.unit(d), b = g.unit(d);
      const Matrix rho = oracle::projector(oracle::kron(a, b));
      const double expected = (1.0 + std::norm(a.dot(b))) / 2.0;
      EXPECT_NEAR(st.symmetric_probability(rho), expected, 1e-9);
      EXPECT_NEAR(projector_accept(rho, d), expected, 1e-9);
    }
  }
}

TEST(SwapTest, MixedPairLaw) {
  oracle::Gen g(2);
  for (Index d : {2, 4}) {
    const SwapTest st(d);
    for (int t = 0; t < 20; ++t) {
      const Matrix r = g.density(d), s = g.density(d);
      const double expected = (1.0 + (r * s).trace().real()) / 2.0;
      EXPECT_NEAR(st.symmetric_probability(oracle::kron(r, s)), expected, 1e-9);
    }
  }
  EXPECT_THROW(SwapTest(2).symmetric_probability(Matrix::Identity(8, 8) / 8.0), DimensionError);
}

TEST(Wilson, Basics) {
  const auto w = wilson_interval(750, 1000);
  EXPECT_LT(w.lo, 0.75);
  EXPECT_GT(w.hi, 0.75);
  const auto all = wilson_interval(1000, 1000);
  EXPECT_NEAR(all.hi, 1.0, 1e-12);
  EXPECT_LT(all.lo, 1.0);
  EXPECT_GT(all.lo, 0.99);
  const auto none = wilson_interval(0, 10);
  EXPECT_NEAR(none.lo, 0.0, 1e-12);
}

TEST(SecureInstance, PadProperties) {
  for (int n : {1, 2}) {
    const auto inst = build_secure_instance(n, 0.01);
    EXPECT_EQ(inst.key_bits(), 2 * n);
    EXPECT_EQ(inst.provenance, Provenance::SecureOtp);
    EXPECT_LT(max_abs(key_average(inst.family).choi() - depolarizing(n, n).choi()), 1e-12);
  }
  const auto inst = build_secure_instance(1, 0.01);
  const auto rep = check_eps_private(inst.family, pauli_decrypt_family(1), 0.01);
  EXPECT_EQ(rep.verdict, PrivacyVerdict::ConsistentWithPrivate);
}

TEST(ExactProtocol, IdenticalPureProofsAlwaysAccepted) {
  const auto inst = identity_instance(1);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = exact_accept_probability(inst, doubled_proof(random_pure_state(4, s)));
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
  }
  EXPECT_NEAR(optimal_proof_accept(inst).probability, 1.0, 1e-9);
}

TEST(ExactProtocol, PadOnPurificationsOfMixedStates) {
  const auto inst = build_secure_instance(1, 0.0);
  const auto bell = PureState::maximally_entangled(1);
  const auto r = exact_accept_probability(inst, doubled_proof(bell));
  // Each branch ends in I/4 on (K, R): (1 + tr(sigma1 sigma2)) / 2 = 5/8.
  EXPECT_NEAR(r.probability, 0.625, 1e-12);
  const Matrix out = apply_branches(depolarizing(1, 1), depolarizing(1, 1), doubled_proof(bell).matrix(), 1);
  const Matrix s1 = oracle::trace_high(out, 4, 4), s2 = oracle::trace_low(out, 4, 4);
  EXPECT_NEAR(r.probability, (1.0 + (s1 * s2).trace().real()) / 2.0, 1e-12);
  EXPECT_NEAR(r.probability, projector_accept(out, 4), 1e-12);
}

TEST(OptimalProof, PadValues) {
  for (int n : {1, 2}) {
    const auto inst = build_secure_instance(n, 0.0);
    const auto opt = optimal_proof_accept(inst);
    const double d = std::pow(2.0, n);
    EXPECT_NEAR(opt.probability, 0.5 + 1.0 / (2.0 * d), 1e-9);
    const auto achieved = exact_accept_probability(inst, DensityOperator::from_pure(opt.proof));
    EXPECT_NEAR(achieved.probability, opt.probability, 1e-9);
  }
}

TEST(OptimalProof, RandomProofsDoNotExceedOptimum) {
  const auto inst = build_secure_instance(1, 0.0);
  const double best = optimal_proof_accept(inst).probability;
  for (std::uint64_t s = 0; s < 30; ++s) {
    EXPECT_LE(exact_accept_probability(inst, random_density(16, 1 + s % 16, s)).probability, best + 1e-9);
  }
}

TEST(KeyLinearity, PairEnumerationMatchesAveragedChannel) {
  const auto inst = build_secure_instance(1, 0.0);
  const auto skewed = make_instance(KeyedChannelFamily(2, CircuitBuilder(1).keyed_pauli(0, 0, 0).h(0).keyed_pauli(0, 1, 1).build()),
                                    0.0, 1.0, Provenance::Custom);
  for (const auto* i : {&inst, &skewed}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto proof = random_density(16, 3, s);
      EXPECT_NEAR(accept_probability_by_key_pairs(*i, proof), exact_accept_probability(*i, proof).probability, 1e-12);
    }
  }
}

TEST(SampledProtocol, DeterministicPerSeed) {
  const auto inst = build_secure_instance(1, 0.0);
  const auto proof = DensityOperator::from_pure(optimal_proof_accept(inst).proof);
  const auto a = run_protocol_sampled(inst, proof, 2000, 5);
  const auto b = run_protocol_sampled(inst, proof, 2000, 5);
  EXPECT_EQ(a.accepts, b.accepts);
  EXPECT_EQ(a.mode, ProtocolMode::Sampled);
}

TEST(SampledProtocol, ExactOneInstance) {
  const auto r = run_protocol_sampled(identity_instance(1), doubled_proof(random_pure_state(4, 1)), 1000, 2);
  EXPECT_EQ(r.accepts, 1000u);
  EXPECT_NEAR(r.probability, 1.0, 0.0);
}

TEST(SampledProtocol, FrequencyMatchesExactValue) {
  const auto inst = build_secure_instance(1, 0.0);
  const auto proof = DensityOperator::from_pure(optimal_proof_accept(inst).proof);
  const auto r = run_protocol_sampled(inst, proof, 100000, 9);
  EXPECT_LE(r.ci95.lo, 0.75);
  EXPECT_GE(r.ci95.hi, 0.75);
}

TEST(InsecureInstance, TargetVerifierLeavesAcceptingSubspaceAlone) {
  const auto v = target_verifier();
  const auto inst = build_insecure_instance(v, 0.0, 0.5);
  EXPECT_EQ(inst.provenance, Provenance::InsecureFromVerifier);
  EXPECT_EQ(inst.message_qubits(), 2);
  EXPECT_EQ(inst.key_bits(), 4);
  EXPECT_LE(accepting_subspace_deviation(inst, v, 1), 1e-9);
  // Completeness: |psi> ⊗ |psi> with psi = |gamma, xi> ⊗ |0>_R is accepted with certainty.
  const Vector gamma = PureState::basis(2, 1).amplitudes();
  const Vector branch = oracle::kron(PureState::zero(2).amplitudes(), oracle::kron(PureState::basis(2, 0).amplitudes(), gamma));
  EXPECT_NEAR(exact_accept_probability(inst, doubled_proof(PureState(branch))).probability, 1.0, 1e-9);
}

TEST(InsecureInstance, RotationVerifierWithinBudget) {
  const auto v = rotation_verifier(0.96);
  const auto inst = build_insecure_instance(v, 0.04, 0.5);
  EXPECT_LE(accepting_subspace_deviation(inst, v, 2), 0.6);
}

TEST(InsecureInstance, RejectingVerifierIsWrongSide) {
  ToyVerifierSpec s;
  s.kind = "always_reject";
  EXPECT_THROW(build_insecure_instance(make_toy_verifier(s), 0.04, 0.5), WrongSideError);
}

TEST(Soundness, GapAtOneQubit) {
  const double complete = exact_accept_probability(identity_instance(1), doubled_proof(random_pure_state(4, 3))).probability;
  const double sound = optimal_proof_accept(build_secure_instance(1, 0.0)).probability;
  EXPECT_GE(complete - sound, 0.25 - 1e-6);
}

// Two independent copies: ||E ⊗ E - Omega ⊗ Omega|| <= 2 ||E - Omega|| on sampled inputs.
TEST(TensorizedSecurity, TwoCopyDeviationAtMostTwiceSingle) {
  const auto partial = KeyedChannelFamily(1, CircuitBuilder(1).keyed_pauli(0, 0, 0).build());  // I or XZ
  const auto avg = key_average(partial);
  const auto om = depolarizing(1, 1);
  const double d2 = diamond_distance(avg, om, 20, 1).lower_bound;
  ASSERT_GT(d2, 0.1);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Matrix proof = random_density(16, 1 + s % 4, s).matrix();
    const double two = trace_norm(apply_branches(avg, avg, proof, 1) - apply_branches(om, om, proof, 1));
    EXPECT_LE(two, 2.0 * d2 + 1e-9);
  }
}

TEST(Instances, ValidationAndBudget) {
  EXPECT_THROW(make_instance(key_ignoring_family(1, 2), 1.0, 1.0, Provenance::Custom), DomainError);
  EXPECT_THROW(make_instance(key_ignoring_family(1, 2), 0.0, 0.0, Provenance::Custom), DomainError);
  const auto shrinking = KeyedChannelFamily(0, CircuitBuilder(2).trace_out({1}).build());
  EXPECT_THROW(make_instance(shrinking, 0.0, 1.0, Provenance::Custom), DomainError);

  const auto big = make_instance(key_ignoring_family(1, 13), 0.0, 1.0, Provenance::Custom);
  EXPECT_THROW(exact_accept_probability(big, DensityOperator::maximally_mixed(4)), BudgetError);
  EXPECT_NO_THROW(run_protocol_sampled(big, DensityOperator::maximally_mixed(4), 10, 1));
  // References larger than the message register are rejected.
  EXPECT_THROW(exact_accept_probability(build_secure_instance(1, 0.0), DensityOperator::maximally_mixed(6)),
               DimensionError);
}

TEST(Instances, JsonRoundTripAndReport) {
  const auto inst = build_insecure_instance(target_verifier(), 0.0, 0.5);
  const auto back = instance_from_json(Json::parse(instance_to_json(inst).dump()));
  EXPECT_EQ(back.provenance, Provenance::InsecureFromVerifier);
  EXPECT_EQ(back.key_bits(), inst.key_bits());
  EXPECT_DOUBLE_EQ(back.delta, 0.5);
  for (std::uint64_t k : {0ull, 5ull, 15ull}) {
    EXPECT_LT(max_abs(back.family.channel(k).choi() - inst.family.channel(k).choi()), 1e-12);
  }
  const auto secure = build_secure_instance(1, 0.0);
  const auto r = run_protocol_sampled(secure, DensityOperator::maximally_mixed(4), 100, 3, "maximally-mixed");
  const auto j = protocol_report_json(secure, r);
  EXPECT_EQ(j["mode"], "SAMPLED");
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["proof_spec"], "maximally-mixed");
}

#pragma once

// Detecting insecure encryption: instances, the swap test, and the
// two-branch protocol (encrypt both halves of a proof under independent
// keys, accept on the symmetric outcome) in exact and sampled form.
//
// Proof register layout, qubit 0 first: H1, R1, H2, R2 with dim R = dim H.
// After encryption the branches are (K1, R1) low and (K2, R2) high.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qct/channel_algebra.hpp"
#include "qct/circuit_io.hpp"
#include "qct/verifier.hpp"

namespace qct {

enum class Provenance { SecureOtp, InsecureFromVerifier, Custom };
std::string_view to_string(Provenance p);

struct DIInstance {
  KeyedChannelFamily family;
  double eps = 0.0;
  double delta = 1.0;
  Provenance provenance = Provenance::Custom;

  int message_qubits() const noexcept { return family.in_qubits(); }
  int key_bits() const noexcept { return family.key_bits(); }
  /// Qubits of one proof branch (message plus reference).
  int branch_qubits() const noexcept { return 2 * message_qubits(); }
  int proof_qubits() const noexcept { return 4 * message_qubits(); }
};

/// Validates dim_out >= dim_in.
DIInstance make_instance(KeyedChannelFamily family, double eps, double delta, Provenance provenance);
DIInstance build_secure_instance(int qubits, double eps);
/// Key k maps to the circuit-testing instance with C0 = identity and
/// C1 = Pauli pad under key k. Throws WrongSideError unless p* >= 1 - eps.
DIInstance build_insecure_instance(const VerifierCircuit& v, double eps, double delta);

/// {"key_bits", "template", "eps", "delta", "provenance"}
OrderedJson instance_to_json(const DIInstance& inst);
DIInstance instance_from_json(const Json& doc, const std::string& path = "");

class SwapTest {
 public:
  explicit SwapTest(Index branch_dim);

  Index branch_dim() const noexcept { return d_; }
  /// (I + W)/2 on C^D ⊗ C^D, first factor on the high half.
  Matrix projector() const;
  /// tr(P_sym rho) without forming the projector.
  double symmetric_probability(const Matrix& rho) const;

 private:
  Index d_;
};

SwapTest build_swap_test(Index branch_dim);

struct WilsonInterval {
  double lo;
  double hi;
};
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

enum class ProtocolMode { Exact, Sampled };
std::string_view to_string(ProtocolMode m);

struct ProtocolResult {
  ProtocolMode mode = ProtocolMode::Exact;
  double probability = 0.0;  // exact mode; sampled mode stores the frequency too
  std::uint64_t shots = 0;
  std::uint64_t accepts = 0;
  WilsonInterval ci95{0.0, 1.0};
  std::string proof;
  std::uint64_t seed = 0;
};

/// (E_{k1} ⊗ id_R ⊗ E_{k2} ⊗ id_R)(proof) for explicit channels.
Matrix apply_branches(const QuantumChannel& e1, const QuantumChannel& e2, const Matrix& proof, int message_qubits);

/// Uses the key-averaged channel on each branch.
ProtocolResult exact_accept_probability(const DIInstance& inst, const DensityOperator& proof,
                                        std::string proof_label = "custom");
/// Same value by enumerating all key pairs.
double accept_probability_by_key_pairs(const DIInstance& inst, const DensityOperator& proof);

struct ProofOptimum {
  double probability;
  PureState proof;
};
ProofOptimum optimal_proof_accept(const DIInstance& inst);

/// Draws k1, k2 uniformly per shot from a std::mt19937_64 seeded with `seed`.
ProtocolResult run_protocol_sampled(const DIInstance& inst, const DensityOperator& proof, std::uint64_t shots,
                                    std::uint64_t seed, std::string proof_label = "custom");

/// |psi> ⊗ |psi> with psi on one branch (message plus reference).
DensityOperator doubled_proof(const PureState& branch_state);

/// max over keys of the largest probe distance ||(E_k ⊗ id)(rho) - rho||_tr
/// on inputs |gamma> ⊗ |xi> from the verifier's accepting subspace.
double accepting_subspace_deviation(const DIInstance& inst, const VerifierCircuit& v, std::uint64_t seed = 0);

/// {instance, mode, proof_spec, p | {shots, accepts, freq, ci95}, seed}
OrderedJson protocol_report_json(const DIInstance& inst, const ProtocolResult& r);

}  // namespace qct

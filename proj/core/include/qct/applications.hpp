#pragma once

// Statistics for four special cases of circuit testing: non-identity,
// non-isometry, pure fixed point and minimum output entropy. All of them
// optimize over pure inputs with seeded multi-restart local search.

#include <cstdint>
#include <string_view>

#include "qct/circuit_io.hpp"
#include "qct/quantum_channel.hpp"

namespace qct {

enum class Problem { NonIdentity, NonIsometry, PureFixedPoint, MinOutputEntropy };
std::string_view to_string(Problem p);

/// Which promise the statistic is consistent with.
enum class Side { Yes, No, Neither };
std::string_view to_string(Side s);

struct ProblemVerdict {
  Problem problem = Problem::NonIdentity;
  double statistic = 0.0;
  double eps = 0.0;
  double yes_bound = 0.0;
  double no_bound = 0.0;
  Side side = Side::Neither;
  /// Set when the side rests on a search result that only bounds the true
  /// optimum from one direction.
  bool heuristic = false;
  PureState witness = PureState::zero(0);
  std::uint64_t seed = 0;
};

struct SearchOptions {
  int restarts = 20;
  int iterations = 200;
  std::uint64_t seed = 0;
  double eps = 0.1;
};

/// Lower bound on ||C - id||_diamond. YES if >= 2 - eps, NO if <= eps.
ProblemVerdict nonidentity_stat(const QuantumChannel& c, const SearchOptions& opt = {});
/// min over |psi> in X ⊗ X of ||(C ⊗ id)(psi)||_op. YES if <= eps, NO if >= 1 - eps.
ProblemVerdict nonisometry_stat(const QuantumChannel& c, const SearchOptions& opt = {});
/// min ||C(psi) - psi||_tr. YES if <= eps, NO if >= 2 - eps.
ProblemVerdict pure_fixed_point_search(const QuantumChannel& c, const SearchOptions& opt = {});
/// min S(C(psi)) in bits. YES if <= eps n, NO if >= (1 - eps) n with n input qubits.
ProblemVerdict min_output_entropy(const QuantumChannel& c, const SearchOptions& opt = {});

/// {problem, statistic, eps, side, witness: [[re, im], ...], seed}
OrderedJson verdict_to_json(const ProblemVerdict& v);

}  // namespace qct

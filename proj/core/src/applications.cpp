#include "qct/applications.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "qct/channel_algebra.hpp"

namespace qct {

std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::NonIdentity:
      return "NON_IDENTITY";
    case Problem::NonIsometry:
      return "NON_ISOMETRY";
    case Problem::PureFixedPoint:
      return "PURE_FIXED_POINT";
    case Problem::MinOutputEntropy:
      return "MIN_OUTPUT_ENTROPY";
  }
  return "?";
}

std::string_view to_string(Side s) {
  switch (s) {
    case Side::Yes:
      return "YES";
    case Side::No:
      return "NO";
    case Side::Neither:
      return "NEITHER";
  }
  return "?";
}

namespace {

void check_options(const SearchOptions& opt) {
  if (opt.restarts < 1) throw DomainError("restarts must be >= 1");
  if (opt.iterations < 1) throw DomainError("iterations must be >= 1");
  if (!(opt.eps >= 0.0)) throw DomainError("eps must be non-negative");
}

// Every statistic here errs toward NO (lower bounds on a max, upper bounds
// on a min), so a YES reading is certified and a NO reading is heuristic.
void decide(ProblemVerdict& v, bool large_means_yes) {
  const bool yes = large_means_yes ? v.statistic >= v.yes_bound : v.statistic <= v.yes_bound;
  const bool no = large_means_yes ? v.statistic <= v.no_bound : v.statistic >= v.no_bound;
  v.side = yes ? Side::Yes : (no ? Side::No : Side::Neither);
  v.heuristic = v.side == Side::No;
}

/// Deterministic starts followed by Haar-random ones.
std::vector<Vector> starts(Index dim, const SearchOptions& opt, bool with_entangled, int half_qubits) {
  std::vector<Vector> out;
  if (with_entangled) out.push_back(PureState::maximally_entangled(half_qubits).amplitudes());
  for (Index k = 0; k < std::min<Index>(dim, 4); ++k) out.push_back(PureState::basis(dim, k).amplitudes());
  out.push_back(Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0)));
  for (int r = 0; r < opt.restarts; ++r) {
    out.push_back(random_pure_state(dim, derive_seed(opt.seed, static_cast<std::uint64_t>(r))).amplitudes());
  }
  return out;
}

Matrix herm(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

ProblemVerdict nonidentity_stat(const QuantumChannel& c, const SearchOptions& opt) {
  check_options(opt);
  if (c.in_qubits() != c.out_qubits()) throw DimensionError("non-identity test needs dim_in = dim_out");
  const auto est = diamond_distance(c, QuantumChannel::identity(c.in_qubits()), opt.restarts, opt.seed);
  ProblemVerdict v;
  v.problem = Problem::NonIdentity;
  v.statistic = est.lower_bound;
  v.eps = opt.eps;
  v.yes_bound = 2.0 - opt.eps;
  v.no_bound = opt.eps;
  v.witness = est.witness;
  v.seed = opt.seed;
  decide(v, true);
  return v;
}

ProblemVerdict nonisometry_stat(const QuantumChannel& c, const SearchOptions& opt) {
  check_options(opt);
  const int n = c.in_qubits();
  require_capacity(std::max(n, c.out_qubits()) + n, "non-isometry search");
  const Index dim = dim_of(2 * n);
  double best = std::numeric_limits<double>::infinity();
  Vector best_psi;
  for (Vector psi : starts(dim, opt, true, n)) {
    for (int t = 0; t < opt.iterations; ++t) {
      const Matrix out = herm(c.apply(psi * psi.adjoint(), n));
      Eigen::SelfAdjointEigenSolver<Matrix> es(out);
      const Index top = es.eigenvalues().size() - 1;
      const double value = es.eigenvalues()(top);
      if (value < best) {
        best = value;
        best_psi = psi;
      }
      // Subgradient of the top eigenvalue projected onto the tangent space of the sphere.
      const Vector u = es.eigenvectors().col(top);
      const Matrix g = herm(c.apply_adjoint(u * u.adjoint(), n));
      const Vector gpsi = g * psi;
      const Vector step = gpsi - psi.dot(gpsi) * psi;
      if (step.norm() < 1e-13) break;
      psi -= (0.5 / std::sqrt(static_cast<double>(t + 1))) * step;
      psi /= psi.norm();
    }
  }
  ProblemVerdict v;
  v.problem = Problem::NonIsometry;
  v.statistic = best;
  v.eps = opt.eps;
  v.yes_bound = opt.eps;
  v.no_bound = 1.0 - opt.eps;
  v.witness = PureState(best_psi / best_psi.norm());
  v.seed = opt.seed;
  decide(v, false);
  return v;
}

ProblemVerdict pure_fixed_point_search(const QuantumChannel& c, const SearchOptions& opt) {
  check_options(opt);
  if (c.in_qubits() != c.out_qubits()) throw DimensionError("fixed-point search needs dim_in = dim_out");
  const Index dim = c.dim_in();
  double best = std::numeric_limits<double>::infinity();
  Vector best_psi;
  for (Vector psi : starts(dim, opt, false, 0)) {
    for (int t = 0; t < opt.iterations; ++t) {
      const Matrix proj = psi * psi.adjoint();
      const Matrix out = herm(c.apply(proj));
      const double value = trace_norm(out - proj);
      if (value < best) {
        best = value;
        best_psi = psi;
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(out);
      const Index top = dim - 1;
      const double lmax = es.eigenvalues()(top);
      Index first = top;
      while (first > 0 && es.eigenvalues()(first - 1) >= lmax - 1e-12) --first;
      Vector next = es.eigenvectors().col(top);
      if (first < top) {
        // Degenerate top eigenspace: stay as close as possible to the current iterate.
        const Matrix basis = es.eigenvectors().middleCols(first, top - first + 1);
        const Vector projected = basis * (basis.adjoint() * psi);
        if (projected.norm() > 1e-9) next = projected / projected.norm();
      }
      if (std::abs(next.dot(psi)) > 1.0 - 1e-14) break;
      psi = next;
    }
  }
  ProblemVerdict v;
  v.problem = Problem::PureFixedPoint;
  v.statistic = best;
  v.eps = opt.eps;
  v.yes_bound = opt.eps;
  v.no_bound = 2.0 - opt.eps;
  v.witness = PureState(best_psi / best_psi.norm());
  v.seed = opt.seed;
  decide(v, false);
  return v;
}

ProblemVerdict min_output_entropy(const QuantumChannel& c, const SearchOptions& opt) {
  check_options(opt);
  const Index dim = c.dim_in();
  double best = std::numeric_limits<double>::infinity();
  Vector best_psi;
  for (Vector psi : starts(dim, opt, false, 0)) {
    double last = std::numeric_limits<double>::infinity();
    for (int t = 0; t < opt.iterations; ++t) {
      const Matrix out = herm(c.apply(psi * psi.adjoint()));
      Eigen::SelfAdjointEigenSolver<Matrix> es(out);
      double s = 0.0;
      Eigen::VectorXd neglog(es.eigenvalues().size());
      for (Index i = 0; i < neglog.size(); ++i) {
        const double l = std::max(es.eigenvalues()(i), 1e-15);
        neglog(i) = -std::log2(l);
        if (es.eigenvalues()(i) > 1e-15) s -= es.eigenvalues()(i) * std::log2(es.eigenvalues()(i));
      }
      if (s < best) {
        best = s;
        best_psi = psi;
      }
      if (s > last - 1e-14) break;
      last = s;
      // Concavity: minimizing the linearization <psi|C^dagger(-log rho)|psi> cannot raise the entropy.
      const Matrix obs = es.eigenvectors() * neglog.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
      Eigen::SelfAdjointEigenSolver<Matrix> lin(herm(c.apply_adjoint(obs)));
      psi = lin.eigenvectors().col(0);
    }
  }
  ProblemVerdict v;
  v.problem = Problem::MinOutputEntropy;
  v.statistic = std::max(best, 0.0);
  v.eps = opt.eps;
  const double n = static_cast<double>(c.in_qubits());
  v.yes_bound = opt.eps * n;
  v.no_bound = (1.0 - opt.eps) * n;
  v.witness = PureState(best_psi / best_psi.norm());
  v.seed = opt.seed;
  decide(v, false);
  return v;
}

OrderedJson verdict_to_json(const ProblemVerdict& v) {
  OrderedJson j;
  j["problem"] = std::string(to_string(v.problem));
  j["statistic"] = v.statistic;
  j["eps"] = v.eps;
  j["side"] = std::string(to_string(v.side));
  j["heuristic"] = v.heuristic;
  OrderedJson amps = OrderedJson::array();
  for (Index i = 0; i < v.witness.dim(); ++i) {
    amps.push_back({v.witness.amplitudes()(i).real(), v.witness.amplitudes()(i).imag()});
  }
  j["witness"] = std::move(amps);
  j["seed"] = v.seed;
  return j;
}

}  // namespace qct

#include "qct/state_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qct/kernels.hpp"

namespace qct {
namespace {

void require_finite(const Matrix& x, const char* what) {
  if (!x.allFinite()) throw NumericError(std::string(what) + ": non-finite entries");
}

void require_square(const Matrix& x, const char* what) {
  if (x.rows() != x.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
}

int qubits_for_size(Index size) {
  int q = 0;
  while (dim_of(q) < size) ++q;
  return q;
}

Vector gaussian_vector(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

Matrix ginibre(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

int qubit_count(Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int q = 0;
  while (dim_of(q) < dim) ++q;
  return q;
}

// ---------------------------------------------------------------------------
// RegisterLayout

RegisterLayout::RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (registers_[i].qubits < 0) throw DomainError("register '" + registers_[i].name + "' has negative size");
    for (std::size_t j = 0; j < i; ++j) {
      if (registers_[j].name == registers_[i].name) {
        throw DomainError("duplicate register name '" + registers_[i].name + "'");
      }
    }
    total_qubits_ += registers_[i].qubits;
  }
}

bool RegisterLayout::contains(std::string_view name) const {
  return std::any_of(registers_.begin(), registers_.end(), [&](const Register& r) { return r.name == name; });
}

const RegisterLayout::Register& RegisterLayout::find(std::string_view name) const {
  for (const auto& r : registers_) {
    if (r.name == name) return r;
  }
  throw DomainError("no register named '" + std::string(name) + "'");
}

int RegisterLayout::qubits(std::string_view name) const { return find(name).qubits; }

int RegisterLayout::offset(std::string_view name) const {
  int off = total_qubits_;
  for (const auto& r : registers_) {
    off -= r.qubits;
    if (r.name == name) return off;
  }
  throw DomainError("no register named '" + std::string(name) + "'");
}

std::vector<int> RegisterLayout::wires(std::string_view name) const {
  const int off = offset(name);
  std::vector<int> w(static_cast<std::size_t>(qubits(name)));
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = off + static_cast<int>(i);
  return w;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  qubit_count(amplitudes_.size());
  if (!amplitudes_.allFinite()) throw NumericError("pure state: non-finite amplitudes");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kUnitTol) {
    std::ostringstream msg;
    msg << "pure state norm " << norm << " differs from 1";
    throw InvalidStateError(msg.str());
  }
}

PureState PureState::basis(Index dim, Index index) {
  if (index < 0 || index >= dim) throw DomainError("basis index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::maximally_entangled(int qubits) {
  const Index d = dim_of(qubits);
  Vector v = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState(std::move(v));
}

Complex PureState::overlap(const PureState& other) const {
  if (other.dim() != dim()) throw DimensionError("overlap of states with different dimensions");
  return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------
// DensityOperator

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void validate_density(const Matrix& m) {
  require_square(m, "density operator");
  qubit_count(m.rows());
  require_finite(m, "density operator");
  if (!is_hermitian(m)) throw InvalidStateError("density operator is not Hermitian");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kUnitTol || std::abs(m.trace().imag()) > kUnitTol) {
    std::ostringstream msg;
    msg << "density operator trace " << tr << " differs from 1";
    throw InvalidStateError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -kPsdTol) {
    std::ostringstream msg;
    msg << "density operator has eigenvalue " << lo << " below -" << kPsdTol;
    throw InvalidStateError(msg.str());
  }
}

DensityOperator::DensityOperator(Matrix matrix) : matrix_(std::move(matrix)) { validate_density(matrix_); }

DensityOperator DensityOperator::from_pure(const PureState& psi) { return DensityOperator(psi.projector()); }

DensityOperator DensityOperator::maximally_mixed(int qubits) {
  const Index d = dim_of(qubits);
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d));
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

// ---------------------------------------------------------------------------
// HermitianObservable

HermitianObservable::HermitianObservable(Matrix matrix) : matrix_(std::move(matrix)) {
  require_square(matrix_, "observable");
  require_finite(matrix_, "observable");
  if (!is_hermitian(matrix_)) throw InvalidStateError("observable is not Hermitian");
}

Eigen::VectorXd HermitianObservable::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool HermitianObservable::is_effect(double tol) const {
  const auto ev = eigenvalues();
  return ev.minCoeff() >= -tol && ev.maxCoeff() <= 1.0 + tol;
}

double HermitianObservable::expectation(const DensityOperator& rho) const {
  if (rho.dim() != dim()) throw DimensionError("observable and state dimensions differ");
  return (matrix_ * rho.matrix()).trace().real();
}

double HermitianObservable::expectation(const PureState& psi) const {
  if (psi.dim() != dim()) throw DimensionError("observable and state dimensions differ");
  return psi.amplitudes().dot(matrix_ * psi.amplitudes()).real();
}

// ---------------------------------------------------------------------------
// tensor / partial trace

Matrix tensor(const Matrix& a, const Matrix& b) {
  require_capacity(qubits_for_size(a.rows() * b.rows()), "tensor product");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  require_capacity(qubits_for_size(a.size() * b.size()), "tensor product");
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState(tensor(a.amplitudes(), b.amplitudes()));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(tensor(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator& rho, const RegisterLayout& layout,
                              const std::set<std::string>& discard) {
  if (layout.dim() != rho.dim()) throw DimensionError("layout does not match state dimension");
  std::vector<int> traced;
  for (const auto& name : discard) {
    const auto w = layout.wires(name);
    traced.insert(traced.end(), w.begin(), w.end());
  }
  if (static_cast<int>(traced.size()) == layout.total_qubits()) {
    throw DimensionError("discarding every register leaves a scalar; take the trace instead");
  }
  return DensityOperator(kernels::partial_trace(rho.matrix(), layout.total_qubits(), traced));
}

// ---------------------------------------------------------------------------
// norms and entropy

double trace_norm(const Matrix& x) {
  require_square(x, "trace norm");
  require_finite(x, "trace norm");
  if (is_hermitian(x, 1e-13)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

double operator_norm(const Matrix& x) {
  require_square(x, "operator norm");
  require_finite(x, "operator norm");
  if (is_hermitian(x, 1e-13)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

double von_neumann_entropy(const Matrix& rho) {
  require_square(rho, "entropy");
  require_finite(rho, "entropy");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-300) s -= l * std::log2(l);
  }
  return std::max(s, 0.0);
}

PureState purify(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const Index d = rho.dim();
  Vector psi = Vector::Zero(d * d);
  for (Index k = 0; k < d; ++k) {
    const double l = es.eigenvalues()(k);
    if (l < -kPsdTol) throw InvalidStateError("cannot purify a state with negative eigenvalues");
    const double amp = std::sqrt(std::max(l, 0.0));
    // reference index k (high), system index s (low)
    psi.segment(k * d, d) = amp * es.eigenvectors().col(k);
  }
  psi /= psi.norm();
  return PureState(std::move(psi));
}

// ---------------------------------------------------------------------------
// random generation

PureState random_pure_state(Index dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("random_pure_state: dim must be >= 1");
  std::mt19937_64 rng(seed);
  Vector v = gaussian_vector(dim, rng);
  v /= v.norm();
  return PureState(std::move(v));
}

DensityOperator random_density(Index dim, Index rank, std::uint64_t seed) {
  if (rank < 1 || rank > dim) throw DomainError("random_density: rank must lie in [1, dim]");
  std::mt19937_64 rng(seed);
  Matrix g = ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(std::move(rho));
}

Matrix random_unitary(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < dim; ++i) {
    const Complex di = r(i, i);
    const double mag = std::abs(di);
    q.col(i) *= (mag > 0.0) ? di / mag : Complex(1.0, 0.0);
  }
  return q;
}

HermitianObservable random_effect(Index dim, std::uint64_t seed) {
  const Matrix u = random_unitary(dim, seed);
  std::mt19937_64 rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd ev(dim);
  for (Index i = 0; i < dim; ++i) ev(i) = unit(rng);
  Matrix x = u * ev.cast<Complex>().asDiagonal() * u.adjoint();
  x = 0.5 * (x + x.adjoint()).eval();
  return HermitianObservable(std::move(x));
}

}  // namespace qct

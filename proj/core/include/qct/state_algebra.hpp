#pragma once

// Dense states, operators and the distance measures used throughout qct.
//
// Ordering convention: qubit 0 is the least significant bit of a
// computational-basis index. `tensor(a, b)` is the ordinary Kronecker
// product, so `b` occupies the low qubits and `a` the high ones. A
// RegisterLayout lists registers in the same written order (leftmost
// register = most significant qubits).

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qct/config.hpp"
#include "qct/errors.hpp"

namespace qct {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Index dim_of(int qubits) { return Index{1} << qubits; }

/// n such that 2^n == dim. Throws DimensionError for non powers of two.
int qubit_count(Index dim);

class RegisterLayout {
 public:
  struct Register {
    std::string name;
    int qubits;
  };

  RegisterLayout() = default;
  /// Registers in written tensor order; the last one holds qubit 0.
  explicit RegisterLayout(std::vector<Register> registers);

  const std::vector<Register>& registers() const noexcept { return registers_; }
  int total_qubits() const noexcept { return total_qubits_; }
  Index dim() const noexcept { return dim_of(total_qubits_); }
  bool contains(std::string_view name) const;
  int qubits(std::string_view name) const;
  /// Qubit index of the register's least significant qubit.
  int offset(std::string_view name) const;
  /// Qubit indices of the register, least significant first.
  std::vector<int> wires(std::string_view name) const;

 private:
  const Register& find(std::string_view name) const;

  std::vector<Register> registers_;
  int total_qubits_ = 0;
};

class PureState {
 public:
  /// Validates unit norm within kUnitTol and a power-of-two dimension.
  explicit PureState(Vector amplitudes);

  static PureState basis(Index dim, Index index);
  static PureState zero(int qubits) { return basis(dim_of(qubits), 0); }
  /// (1/sqrt d) sum_i |i>|i> on 2*qubits qubits.
  static PureState maximally_entangled(int qubits);

  Index dim() const noexcept { return amplitudes_.size(); }
  int qubits() const { return qubit_count(dim()); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }
  /// <this|other>
  Complex overlap(const PureState& other) const;

 private:
  Vector amplitudes_;
};

class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity (min eigenvalue >= -kPsdTol).
  explicit DensityOperator(Matrix matrix);

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(int qubits);

  Index dim() const noexcept { return matrix_.rows(); }
  int qubits() const { return qubit_count(dim()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  double purity() const;

 private:
  Matrix matrix_;
};

class HermitianObservable {
 public:
  explicit HermitianObservable(Matrix matrix);

  Index dim() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  Eigen::VectorXd eigenvalues() const;
  /// 0 <= X <= I within tol.
  bool is_effect(double tol = kPsdTol) const;
  double expectation(const DensityOperator& rho) const;
  double expectation(const PureState& psi) const;

 private:
  Matrix matrix_;
};

bool is_hermitian(const Matrix& m, double tol = kUnitTol);
/// Throws InvalidStateError describing the first violated density invariant.
void validate_density(const Matrix& m);

Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);
PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Traces out the named registers. Discarding every register is rejected;
/// use the matrix trace for that case.
DensityOperator partial_trace(const DensityOperator& rho, const RegisterLayout& layout,
                              const std::set<std::string>& discard);

/// Sum of singular values.
double trace_norm(const Matrix& x);
/// Largest singular value.
double operator_norm(const Matrix& x);
/// Von Neumann entropy in bits of a Hermitian PSD matrix.
double von_neumann_entropy(const Matrix& rho);

/// Eigendecomposition purification on (reference ⊗ system); tracing the
/// reference (high) half returns rho.
PureState purify(const DensityOperator& rho);

/// Haar-distributed pure state, deterministic per seed.
PureState random_pure_state(Index dim, std::uint64_t seed);
/// Induced-measure mixed state of the given rank (rank == dim gives Hilbert-Schmidt).
DensityOperator random_density(Index dim, Index rank, std::uint64_t seed);
/// Haar unitary via QR of a Ginibre matrix with phase correction.
Matrix random_unitary(Index dim, std::uint64_t seed);
/// Random effect 0 <= X <= I with Haar eigenbasis and uniform eigenvalues.
HermitianObservable random_effect(Index dim, std::uint64_t seed);

}  // namespace qct

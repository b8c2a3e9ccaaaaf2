#pragma once

#include "qct/state_algebra.hpp"

namespace qct {

// Choi convention: J = sum_{ij} |i><j| ⊗ Phi(|i><j|), input copy on the high
// qubits and output on the low ones, so tr J = dim_in and tracing the output
// factor of a trace-preserving map leaves I_{dim_in}.
//
// States passed to apply() carry any reference system on the qubits above
// the channel's input qubits.

/// (Phi ⊗ id_R)(rho) for an arbitrary Hermitian-preserving map given by its Choi matrix.
Matrix apply_choi(const Matrix& choi, int in_qubits, int out_qubits, const Matrix& rho, int reference_qubits);
/// (Phi^dagger ⊗ id_R)(observable).
Matrix apply_choi_adjoint(const Matrix& choi, int in_qubits, int out_qubits, const Matrix& observable,
                          int reference_qubits);

class QuantumChannel {
 public:
  /// Validates complete positivity (Choi PSD within kPsdTol) and trace preservation within 1e-8.
  QuantumChannel(int in_qubits, int out_qubits, Matrix choi);

  static QuantumChannel identity(int qubits);
  static QuantumChannel unitary(const Matrix& u);
  /// Completely depolarizing map to I/dim_out.
  static QuantumChannel depolarizing(int in_qubits, int out_qubits);

  int in_qubits() const noexcept { return in_qubits_; }
  int out_qubits() const noexcept { return out_qubits_; }
  Index dim_in() const noexcept { return dim_of(in_qubits_); }
  Index dim_out() const noexcept { return dim_of(out_qubits_); }
  const Matrix& choi() const noexcept { return choi_; }

  Matrix apply(const Matrix& rho, int reference_qubits = 0) const;
  DensityOperator apply(const DensityOperator& rho, int reference_qubits = 0) const;
  Matrix apply_adjoint(const Matrix& observable, int reference_qubits = 0) const;

  /// next ∘ this
  QuantumChannel then(const QuantumChannel& next) const;
  /// Convex combination weight*this + (1-weight)*other.
  QuantumChannel mix(const QuantumChannel& other, double weight) const;

 private:
  int in_qubits_;
  int out_qubits_;
  Matrix choi_;
};

}  // namespace qct

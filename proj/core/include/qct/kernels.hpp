#pragma once

// Qubit-indexed kernels on raw vectors and matrices. Local gate matrices act
// on `targets` with targets[j] mapped to bit j of the local index.

#include <span>

#include "qct/state_algebra.hpp"

namespace qct::kernels {

/// psi <- U psi on the given targets of an n-qubit vector.
void apply_gate(Vector& psi, int n, const Matrix& gate, std::span<const int> targets);
/// m <- U m acting on the row index.
void apply_gate_rows(Matrix& m, int n, const Matrix& gate, std::span<const int> targets);
/// rho <- U rho U^dagger.
void conjugate(Matrix& rho, int n, const Matrix& gate, std::span<const int> targets);

/// Reduced matrix after tracing the listed qubits; kept qubits keep their relative order.
Matrix partial_trace(const Matrix& rho, int n, std::span<const int> traced);
/// Reduced density matrix of |psi><psi|.
Matrix partial_trace(const Vector& psi, int n, std::span<const int> traced);

/// Inserts `count` qubits in |0> at qubit position `position` (existing
/// qubits at or above it move up by count).
Vector insert_zero_qubits(const Vector& psi, int n, int position, int count);
Matrix insert_zero_qubits(const Matrix& rho, int n, int position, int count);

/// New qubit q takes old qubit perm[q].
Vector permute_qubits(const Vector& psi, std::span<const int> perm);
Matrix permute_qubits(const Matrix& rho, std::span<const int> perm);

/// Swap W on C^d ⊗ C^d: |a>|b> -> |b>|a>.
Matrix swap_operator(Index d);

/// Block-diagonal diag(I, U) with the control as the most significant local qubit.
Matrix controlled(const Matrix& gate);

}  // namespace qct::kernels

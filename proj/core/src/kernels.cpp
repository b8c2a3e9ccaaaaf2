#include "qct/kernels.hpp"

#include <algorithm>
#include <vector>

namespace qct::kernels {
namespace {

std::vector<Index> local_offsets(std::span<const int> targets) {
  const Index local = dim_of(static_cast<int>(targets.size()));
  std::vector<Index> offsets(static_cast<std::size_t>(local), 0);
  for (Index l = 0; l < local; ++l) {
    Index off = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if ((l >> j) & 1) off |= Index{1} << targets[j];
    }
    offsets[static_cast<std::size_t>(l)] = off;
  }
  return offsets;
}

Index target_mask(std::span<const int> targets) {
  Index mask = 0;
  for (int t : targets) mask |= Index{1} << t;
  return mask;
}

void check_targets(int n, const Matrix& gate, std::span<const int> targets) {
  if (gate.rows() != dim_of(static_cast<int>(targets.size())) || gate.cols() != gate.rows()) {
    throw DimensionError("gate matrix does not match its " + std::to_string(targets.size()) +
                         " target(s)");
  }
  std::vector<int> sorted(targets.begin(), targets.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DimensionError("gate targets repeat a wire");
  }
  for (int t : targets) {
    if (t < 0 || t >= n) {
      throw DimensionError("gate target " + std::to_string(t) + " outside " +
                           std::to_string(n) + " wires");
    }
  }
}

// Deposits the bits of `compact` into the positions listed in `positions`.
Index deposit(Index compact, std::span<const int> positions) {
  Index out = 0;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if ((compact >> j) & 1) out |= Index{1} << positions[j];
  }
  return out;
}

std::vector<int> complement(int n, std::span<const int> traced) {
  std::vector<int> kept;
  for (int q = 0; q < n; ++q) {
    if (std::find(traced.begin(), traced.end(), q) == traced.end()) kept.push_back(q);
  }
  return kept;
}

}  // namespace

void apply_gate(Vector& psi, int n, const Matrix& gate, std::span<const int> targets) {
  check_targets(n, gate, targets);
  const auto offsets = local_offsets(targets);
  const Index mask = target_mask(targets);
  const Index local = static_cast<Index>(offsets.size());
  Vector in(local), out(local);
  for (Index base = 0; base < psi.size(); ++base) {
    if (base & mask) continue;
    for (Index l = 0; l < local; ++l) in(l) = psi(base + offsets[static_cast<std::size_t>(l)]);
    out.noalias() = gate * in;
    for (Index l = 0; l < local; ++l) psi(base + offsets[static_cast<std::size_t>(l)]) = out(l);
  }
}

void apply_gate_rows(Matrix& m, int n, const Matrix& gate, std::span<const int> targets) {
  check_targets(n, gate, targets);
  const auto offsets = local_offsets(targets);
  const Index mask = target_mask(targets);
  const Index local = static_cast<Index>(offsets.size());
  Matrix in(local, m.cols()), out(local, m.cols());
  for (Index base = 0; base < m.rows(); ++base) {
    if (base & mask) continue;
    for (Index l = 0; l < local; ++l) in.row(l) = m.row(base + offsets[static_cast<std::size_t>(l)]);
    out.noalias() = gate * in;
    for (Index l = 0; l < local; ++l) m.row(base + offsets[static_cast<std::size_t>(l)]) = out.row(l);
  }
}

void conjugate(Matrix& rho, int n, const Matrix& gate, std::span<const int> targets) {
  apply_gate_rows(rho, n, gate, targets);
  Matrix t = rho.adjoint();
  apply_gate_rows(t, n, gate, targets);
  rho = t.adjoint();
}

Matrix partial_trace(const Matrix& rho, int n, std::span<const int> traced) {
  const auto kept = complement(n, traced);
  const Index dk = dim_of(static_cast<int>(kept.size()));
  const Index dt = dim_of(static_cast<int>(traced.size()));
  std::vector<Index> kept_idx(static_cast<std::size_t>(dk)), traced_idx(static_cast<std::size_t>(dt));
  for (Index i = 0; i < dk; ++i) kept_idx[static_cast<std::size_t>(i)] = deposit(i, kept);
  for (Index t = 0; t < dt; ++t) traced_idx[static_cast<std::size_t>(t)] = deposit(t, traced);

  Matrix out = Matrix::Zero(dk, dk);
  for (Index j = 0; j < dk; ++j) {
    for (Index i = 0; i < dk; ++i) {
      Complex acc{0.0, 0.0};
      for (Index t : traced_idx) {
        acc += rho(kept_idx[static_cast<std::size_t>(i)] | t, kept_idx[static_cast<std::size_t>(j)] | t);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix partial_trace(const Vector& psi, int n, std::span<const int> traced) {
  const auto kept = complement(n, traced);
  const Index dk = dim_of(static_cast<int>(kept.size()));
  const Index dt = dim_of(static_cast<int>(traced.size()));
  // Reshape psi into a dk x dt matrix A, reduced state is A A^dagger.
  Matrix a(dk, dt);
  for (Index t = 0; t < dt; ++t) {
    const Index toff = deposit(t, traced);
    for (Index i = 0; i < dk; ++i) a(i, t) = psi(deposit(i, kept) | toff);
  }
  return a * a.adjoint();
}

Vector insert_zero_qubits(const Vector& psi, int n, int position, int count) {
  if (position < 0 || position > n || count < 0) throw DimensionError("bad ancilla insertion position");
  Vector out = Vector::Zero(psi.size() << count);
  const Index low_mask = dim_of(position) - 1;
  for (Index i = 0; i < psi.size(); ++i) {
    const Index j = (i & low_mask) | ((i & ~low_mask) << count);
    out(j) = psi(i);
  }
  return out;
}

Matrix insert_zero_qubits(const Matrix& rho, int n, int position, int count) {
  if (position < 0 || position > n || count < 0) throw DimensionError("bad ancilla insertion position");
  const Index d = rho.rows();
  Matrix out = Matrix::Zero(d << count, d << count);
  const Index low_mask = dim_of(position) - 1;
  std::vector<Index> map(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) map[static_cast<std::size_t>(i)] = (i & low_mask) | ((i & ~low_mask) << count);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = rho(i, j);
  }
  return out;
}

namespace {
std::vector<Index> permutation_map(Index d, std::span<const int> perm) {
  // new index with bit q = old bit perm[q]
  std::vector<Index> map(static_cast<std::size_t>(d));
  for (Index oldi = 0; oldi < d; ++oldi) {
    Index newi = 0;
    for (std::size_t q = 0; q < perm.size(); ++q) {
      if ((oldi >> perm[q]) & 1) newi |= Index{1} << q;
    }
    map[static_cast<std::size_t>(oldi)] = newi;
  }
  return map;
}
}  // namespace

Vector permute_qubits(const Vector& psi, std::span<const int> perm) {
  if (psi.size() != dim_of(static_cast<int>(perm.size()))) throw DimensionError("permutation size mismatch");
  const auto map = permutation_map(psi.size(), perm);
  Vector out(psi.size());
  for (Index i = 0; i < psi.size(); ++i) out(map[static_cast<std::size_t>(i)]) = psi(i);
  return out;
}

Matrix permute_qubits(const Matrix& rho, std::span<const int> perm) {
  if (rho.rows() != dim_of(static_cast<int>(perm.size()))) throw DimensionError("permutation size mismatch");
  const auto map = permutation_map(rho.rows(), perm);
  Matrix out(rho.rows(), rho.cols());
  for (Index j = 0; j < rho.cols(); ++j) {
    for (Index i = 0; i < rho.rows(); ++i) {
      out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = rho(i, j);
    }
  }
  return out;
}

Matrix swap_operator(Index d) {
  Matrix w = Matrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) w(b * d + a, a * d + b) = 1.0;
  }
  return w;
}

Matrix controlled(const Matrix& gate) {
  const Index d = gate.rows();
  Matrix out = Matrix::Identity(2 * d, 2 * d);
  out.bottomRightCorner(d, d) = gate;
  return out;
}

}  // namespace qct::kernels

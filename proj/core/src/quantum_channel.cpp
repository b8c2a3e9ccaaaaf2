#include "qct/quantum_channel.hpp"

#include <cmath>
#include <sstream>

namespace qct {
namespace {

void check_choi_dims(const Matrix& choi, int in_qubits, int out_qubits) {
  const Index d = dim_of(in_qubits + out_qubits);
  if (choi.rows() != d || choi.cols() != d) {
    throw DimensionError("Choi matrix is " + std::to_string(choi.rows()) + "x" + std::to_string(choi.cols()) +
                         ", expected " + std::to_string(d));
  }
}

// jt[(i,j),(a,b)] = J[(i,a),(j,b)]
Matrix choi_by_input_pairs(const Matrix& choi, Index din, Index dout) {
  Matrix jt(din * din, dout * dout);
  for (Index i = 0; i < din; ++i)
    for (Index j = 0; j < din; ++j)
      for (Index a = 0; a < dout; ++a)
        for (Index b = 0; b < dout; ++b) jt(i * din + j, a * dout + b) = choi(i * dout + a, j * dout + b);
  return jt;
}

}  // namespace

Matrix apply_choi(const Matrix& choi, int in_qubits, int out_qubits, const Matrix& rho, int reference_qubits) {
  check_choi_dims(choi, in_qubits, out_qubits);
  const Index din = dim_of(in_qubits), dout = dim_of(out_qubits), dr = dim_of(reference_qubits);
  if (rho.rows() != din * dr || rho.cols() != din * dr) {
    throw DimensionError("state dimension " + std::to_string(rho.rows()) + " does not match channel input " +
                         std::to_string(din) + " with reference " + std::to_string(dr));
  }
  require_capacity(out_qubits + reference_qubits, "channel output");
  // out[(r,a),(s,b)] = sum_ij rho[(r,i),(s,j)] J[(i,a),(j,b)] as one GEMM.
  Matrix jt = choi_by_input_pairs(choi, din, dout);
  Matrix rr(dr * dr, din * din);
  for (Index r = 0; r < dr; ++r)
    for (Index s = 0; s < dr; ++s)
      for (Index i = 0; i < din; ++i)
        for (Index j = 0; j < din; ++j) rr(r * dr + s, i * din + j) = rho(r * din + i, s * din + j);
  const Matrix o = rr * jt;
  Matrix out(dout * dr, dout * dr);
  for (Index r = 0; r < dr; ++r)
    for (Index s = 0; s < dr; ++s)
      for (Index a = 0; a < dout; ++a)
        for (Index b = 0; b < dout; ++b) out(r * dout + a, s * dout + b) = o(r * dr + s, a * dout + b);
  return out;
}

Matrix apply_choi_adjoint(const Matrix& choi, int in_qubits, int out_qubits, const Matrix& observable,
                          int reference_qubits) {
  check_choi_dims(choi, in_qubits, out_qubits);
  const Index din = dim_of(in_qubits), dout = dim_of(out_qubits), dr = dim_of(reference_qubits);
  if (observable.rows() != dout * dr || observable.cols() != dout * dr) {
    throw DimensionError("observable dimension does not match channel output with reference");
  }
  // G[(s,j),(r,i)] = sum_ab J[(i,a),(j,b)] M[(s,b),(r,a)]
  Matrix jt = choi_by_input_pairs(choi, din, dout);
  Matrix mt(dout * dout, dr * dr);
  for (Index a = 0; a < dout; ++a)
    for (Index b = 0; b < dout; ++b)
      for (Index s = 0; s < dr; ++s)
        for (Index r = 0; r < dr; ++r) mt(a * dout + b, s * dr + r) = observable(s * dout + b, r * dout + a);
  const Matrix g = jt * mt;
  Matrix out(din * dr, din * dr);
  for (Index i = 0; i < din; ++i)
    for (Index j = 0; j < din; ++j)
      for (Index s = 0; s < dr; ++s)
        for (Index r = 0; r < dr; ++r) out(s * din + j, r * din + i) = g(i * din + j, s * dr + r);
  return out;
}

QuantumChannel::QuantumChannel(int in_qubits, int out_qubits, Matrix choi)
    : in_qubits_(in_qubits), out_qubits_(out_qubits), choi_(std::move(choi)) {
  if (in_qubits < 0 || out_qubits < 0) throw DomainError("channel qubit counts must be non-negative");
  require_capacity(in_qubits + out_qubits, "Choi matrix");
  check_choi_dims(choi_, in_qubits, out_qubits);
  if (!choi_.allFinite()) throw NumericError("Choi matrix has non-finite entries");
  if (!is_hermitian(choi_, 1e-8)) throw InvalidStateError("Choi matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(choi_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    std::ostringstream msg;
    msg << "Choi matrix not positive semidefinite (min eigenvalue " << es.eigenvalues().minCoeff() << ")";
    throw InvalidStateError(msg.str());
  }
  const Index din = dim_in(), dout = dim_out();
  double worst = 0.0;
  for (Index i = 0; i < din; ++i) {
    for (Index j = 0; j < din; ++j) {
      const Complex tr = choi_.block(i * dout, j * dout, dout, dout).trace();
      const Complex expect = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      worst = std::max(worst, std::abs(tr - expect));
    }
  }
  if (worst > 1e-8) {
    std::ostringstream msg;
    msg << "channel is not trace preserving (deviation " << worst << ")";
    throw InvalidStateError(msg.str());
  }
}

QuantumChannel QuantumChannel::identity(int qubits) {
  const Index d = dim_of(qubits);
  Vector omega = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) omega(i * d + i) = 1.0;
  return QuantumChannel(qubits, qubits, omega * omega.adjoint());
}

QuantumChannel QuantumChannel::unitary(const Matrix& u) {
  const int q = qubit_count(u.rows());
  const Index d = u.rows();
  Vector v = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) v.segment(i * d, d) = u.col(i);
  return QuantumChannel(q, q, v * v.adjoint());
}

QuantumChannel QuantumChannel::depolarizing(int in_qubits, int out_qubits) {
  const Index d = dim_of(in_qubits + out_qubits);
  return QuantumChannel(in_qubits, out_qubits,
                        Matrix::Identity(d, d) / static_cast<double>(dim_of(out_qubits)));
}

Matrix QuantumChannel::apply(const Matrix& rho, int reference_qubits) const {
  return apply_choi(choi_, in_qubits_, out_qubits_, rho, reference_qubits);
}

DensityOperator QuantumChannel::apply(const DensityOperator& rho, int reference_qubits) const {
  Matrix out = apply(rho.matrix(), reference_qubits);
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityOperator(std::move(out));
}

Matrix QuantumChannel::apply_adjoint(const Matrix& observable, int reference_qubits) const {
  return apply_choi_adjoint(choi_, in_qubits_, out_qubits_, observable, reference_qubits);
}

QuantumChannel QuantumChannel::then(const QuantumChannel& next) const {
  if (next.in_qubits_ != out_qubits_) throw DimensionError("composition: output/input qubit counts differ");
  Matrix choi = next.apply(choi_, in_qubits_);
  choi = 0.5 * (choi + choi.adjoint()).eval();
  return QuantumChannel(in_qubits_, next.out_qubits_, std::move(choi));
}

QuantumChannel QuantumChannel::mix(const QuantumChannel& other, double weight) const {
  if (other.in_qubits_ != in_qubits_ || other.out_qubits_ != out_qubits_) {
    throw DimensionError("mixing channels of different shapes");
  }
  if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("mixing weight must lie in [0, 1]");
  return QuantumChannel(in_qubits_, out_qubits_, weight * choi_ + (1.0 - weight) * other.choi_);
}

}  // namespace qct

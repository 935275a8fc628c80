#include "vvs/qmath.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numeric>

namespace vvs {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(dot(*this)); }

bool BlochVector::is_unit(double tol) const { return std::abs(dot(*this) - 1.0) <= tol; }

BlochVector BlochVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw DomainError("cannot normalize the zero Bloch vector");
  return {x / n, y / n, z / n};
}

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw DimensionError("state vector must have positive dimension");
  const double n2 = amps_.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTol)
    throw DomainError("state vector squared norm " + fmt_double(n2) + " is not 1");
}

StateVector StateVector::normalized(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  return StateVector(amplitudes / n);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis index out of range");
  CVector v = CVector::Zero(idx(dim));
  v(idx(index)) = 1.0;
  return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(CMatrix entries) : rho_(std::move(entries)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols())
    throw DimensionError("density matrix must be square with positive dimension");
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol)
    throw DomainError("density matrix is not Hermitian (deviation " + fmt_double(herm) + ")");
  const cplx tr = rho_.trace();
  if (std::abs(tr - cplx(1.0, 0.0)) > kHermitianTol)
    throw DomainError("density matrix trace " + fmt_double(tr.real()) + " is not 1");
  const double min_eig = eigenvalues().minCoeff();
  if (min_eig < -kPositivityTol)
    throw DomainError("density matrix has negative eigenvalue " + fmt_double(min_eig));
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw DimensionError("dimension must be positive");
  return DensityMatrix(CMatrix::Identity(idx(dim), idx(dim)) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::mixture(double w, const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("mixture of states with different dimensions");
  if (w < 0.0 || w > 1.0) throw DomainError("mixing weight outside [0,1]");
  return DensityMatrix(w * a.matrix() + (1.0 - w) * b.matrix());
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  const CMatrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ModeOperator::ModeOperator(CMatrix entries, OperatorKind kind) : m_(std::move(entries)), kind_(kind) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw DimensionError("operator must be square with positive dimension");
  const auto eye = CMatrix::Identity(m_.rows(), m_.cols());
  switch (kind_) {
    case OperatorKind::unitary:
      if ((m_.adjoint() * m_ - eye).cwiseAbs().maxCoeff() > kOperatorTol)
        throw DomainError("operator declared unitary is not unitary");
      break;
    case OperatorKind::hermitian:
      if (!is_hermitian()) throw DomainError("operator declared hermitian is not Hermitian");
      break;
    case OperatorKind::projector:
      if (!is_hermitian() || (m_ * m_ - m_).cwiseAbs().maxCoeff() > kOperatorTol)
        throw DomainError("operator declared projector is not an orthogonal projector");
      break;
  }
}

ModeOperator ModeOperator::identity(std::size_t dim) {
  return ModeOperator(CMatrix::Identity(idx(dim), idx(dim)), OperatorKind::unitary);
}

bool ModeOperator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

StateVector ModeOperator::apply(const StateVector& psi) const {
  if (psi.dim() != dim()) throw DimensionError("operator/state dimension mismatch");
  return StateVector(m_ * psi.amplitudes());
}

DensityMatrix ModeOperator::conjugate(const DensityMatrix& rho) const {
  if (rho.dim() != dim()) throw DimensionError("operator/state dimension mismatch");
  return DensityMatrix(m_ * rho.matrix() * m_.adjoint());
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  return StateVector(kron(a.amplitudes(), b.amplitudes()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

ModeOperator tensor(const ModeOperator& a, const ModeOperator& b) {
  OperatorKind kind = OperatorKind::hermitian;
  if (a.kind() == OperatorKind::unitary && b.kind() == OperatorKind::unitary)
    kind = OperatorKind::unitary;
  else if (a.kind() == OperatorKind::projector && b.kind() == OperatorKind::projector)
    kind = OperatorKind::projector;
  return ModeOperator(kron(a.matrix(), b.matrix()), kind);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep,
                            const std::vector<std::size_t>& dims) {
  if (dims.empty() || keep >= dims.size()) throw DimensionError("invalid subsystem index");
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != rho.dim()) throw DimensionError("factor dimensions do not multiply to rho.dim");

  // Split the index as (outer, kept, inner) with inner varying fastest.
  std::size_t outer = 1;
  for (std::size_t i = 0; i < keep; ++i) outer *= dims[i];
  const std::size_t dk = dims[keep];
  const std::size_t inner = total / (outer * dk);

  CMatrix red = CMatrix::Zero(idx(dk), idx(dk));
  const CMatrix& m = rho.matrix();
  for (std::size_t a = 0; a < dk; ++a)
    for (std::size_t b = 0; b < dk; ++b) {
      cplx s = 0.0;
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t in = 0; in < inner; ++in) {
          const std::size_t r = (o * dk + a) * inner + in;
          const std::size_t c = (o * dk + b) * inner + in;
          s += m(idx(r), idx(c));
        }
      red(idx(a), idx(b)) = s;
    }
  return DensityMatrix(std::move(red));
}

double fidelity_pure(const StateVector& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) throw DimensionError("fidelity: dimension mismatch");
  const CVector& a = psi.amplitudes();
  const cplx f = a.dot(rho.matrix() * a);  // Eigen's dot conjugates the left operand
  if (std::abs(f.imag()) > kNormTol) throw DomainError("fidelity has an imaginary part");
  return std::clamp(f.real(), 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

double expectation(const DensityMatrix& rho, const ModeOperator& obs) {
  if (rho.dim() != obs.dim()) throw DimensionError("expectation: dimension mismatch");
  if (!obs.is_hermitian()) throw DomainError("expectation of a non-Hermitian observable");
  const cplx v = (rho.matrix() * obs.matrix()).trace();
  if (std::abs(v.imag()) > kOperatorTol) throw DomainError("expectation has an imaginary part");
  return v.real();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace distance: dimension mismatch");
  const CMatrix d = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace vvs

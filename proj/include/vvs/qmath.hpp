// Small dense complex linear algebra for few-photon state spaces.
//
// Every value type validates its invariants on construction and is immutable
// afterwards. Composite spaces use Kronecker order with the first factor as the
// most significant index (polarization before OAM, Alice before Bob).
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vvs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kOperatorTol = 1e-10;

/// Raised when operand dimensions are incompatible.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a value violates a type invariant or a domain precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
  bool is_unit(double tol = kNormTol) const;
  /// Throws DomainError for the zero vector.
  BlochVector normalized() const;
};

class StateVector {
 public:
  /// Validates unit norm within kNormTol.
  explicit StateVector(CVector amplitudes);
  /// Rescales to unit norm; throws DomainError for a zero vector.
  static StateVector normalized(CVector amplitudes);
  /// Computational basis ket |index> in dimension dim.
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  CVector amps_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity (see tolerances above).
  explicit DensityMatrix(CMatrix entries);
  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);
  /// Convex combination w*a + (1-w)*b.
  static DensityMatrix mixture(double w, const DensityMatrix& a, const DensityMatrix& b);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const CMatrix& matrix() const { return rho_; }
  cplx operator()(std::size_t r, std::size_t c) const {
    return rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  /// Eigenvalues of the Hermitized matrix, ascending.
  Eigen::VectorXd eigenvalues() const;

 private:
  CMatrix rho_;
};

enum class OperatorKind { unitary, hermitian, projector };

class ModeOperator {
 public:
  /// Validates the invariant implied by kind within kOperatorTol.
  ModeOperator(CMatrix entries, OperatorKind kind);
  static ModeOperator identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  OperatorKind kind() const { return kind_; }
  bool is_hermitian(double tol = kOperatorTol) const;

  StateVector apply(const StateVector& psi) const;
  /// U rho U^dagger. The result is re-validated as a density matrix.
  DensityMatrix conjugate(const DensityMatrix& rho) const;

 private:
  CMatrix m_;
  OperatorKind kind_;
};

// Standard Pauli matrices in the computational basis.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
/// Kind of the product: unitary if both unitary, projector if both projectors,
/// hermitian otherwise (requires both Hermitian or both unitary).
ModeOperator tensor(const ModeOperator& a, const ModeOperator& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Reduced state of factor `keep` of a composite with factor dimensions `dims`.
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep,
                            const std::vector<std::size_t>& dims);

/// <psi|rho|psi>, clamped to [0,1] after the imaginary part is checked.
double fidelity_pure(const StateVector& psi, const DensityMatrix& rho);

/// Tr rho^2.
double purity(const DensityMatrix& rho);

/// Tr(rho * obs). Throws DomainError for a non-Hermitian observable.
double expectation(const DensityMatrix& rho, const ModeOperator& obs);

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace vvs

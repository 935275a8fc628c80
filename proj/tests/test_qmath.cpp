#include <doctest.h>

#include "support.hpp"
#include "vvs/encoding.hpp"
#include "vvs/qmath.hpp"

using namespace vvs;
using vvs::testing::max_abs;

namespace {

CVector singlet_amps() {
  CVector s = CVector::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  return s;
}

CMatrix werner_by_hand(double v) {
  const CVector s = singlet_amps();
  return v * s * s.adjoint() + (1.0 - v) * CMatrix::Identity(4, 4) / 4.0;
}

}  // namespace

TEST_CASE("tensor of basis kets follows first-factor-major layout") {
  const StateVector a = tensor(StateVector::basis(2, 0), StateVector::basis(2, 0));
  CHECK(a.dim() == 4);
  CHECK(std::abs(a[0] - cplx(1.0)) < 1e-15);
  for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(a[i]) < 1e-15);

  const StateVector hv = tensor(ket_h(), ket_v());
  CHECK(std::abs(hv[1] - cplx(1.0)) < 1e-15);
  CHECK(std::norm(hv[0]) + std::norm(hv[2]) + std::norm(hv[3]) < 1e-30);

  const ModeOperator i4 = tensor(ModeOperator::identity(2), ModeOperator::identity(2));
  CHECK(max_abs(i4.matrix() - CMatrix::Identity(4, 4)) < 1e-15);
  CHECK(i4.kind() == OperatorKind::unitary);
}

TEST_CASE("tensor is associative and multiplies dimensions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = vvs::testing::random_state(rng, 2);
    const auto b = vvs::testing::random_state(rng, 3);
    const auto c = vvs::testing::random_state(rng, 2);
    const StateVector left = tensor(tensor(a, b), c);
    const StateVector right = tensor(a, tensor(b, c));
    CHECK(left.dim() == 12);
    CHECK((left.amplitudes() - right.amplitudes()).norm() < 1e-13);

    const auto ra = vvs::testing::random_density(rng, 2);
    const auto rb = vvs::testing::random_density(rng, 3);
    const auto rc = vvs::testing::random_density(rng, 2);
    CHECK(max_abs(tensor(tensor(ra, rb), rc).matrix() - tensor(ra, tensor(rb, rc)).matrix()) < 1e-13);
  }
}

TEST_CASE("partial trace examples") {
  const DensityMatrix singlet = DensityMatrix::from_pure(polarization_singlet());
  const CMatrix half_identity = CMatrix::Identity(2, 2) / 2.0;
  CHECK(max_abs(partial_trace(singlet, 0, {2, 2}).matrix() - half_identity) < 1e-14);
  CHECK(max_abs(partial_trace(singlet, 1, {2, 2}).matrix() - half_identity) < 1e-14);

  for (double v : {0.0, 0.3, 0.9693, 1.0}) {
    const DensityMatrix w(werner_by_hand(v));
    CHECK(max_abs(partial_trace(w, 0, {2, 2}).matrix() - half_identity) < 1e-14);
    CHECK(max_abs(partial_trace(w, 1, {2, 2}).matrix() - half_identity) < 1e-14);
  }

  CHECK_THROWS_AS(partial_trace(singlet, 0, {2, 3}), DimensionError);
  CHECK_THROWS_AS(partial_trace(singlet, 2, {2, 2}), DimensionError);
}

TEST_CASE("partial trace of a product recovers each factor") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = vvs::testing::random_density(rng, 2);
    const auto b = vvs::testing::random_density(rng, 5);
    const auto c = vvs::testing::random_density(rng, 3);
    const DensityMatrix abc = tensor(tensor(a, b), c);
    CHECK(max_abs(partial_trace(abc, 0, {2, 5, 3}).matrix() - a.matrix()) < 1e-13);
    CHECK(max_abs(partial_trace(abc, 1, {2, 5, 3}).matrix() - b.matrix()) < 1e-13);
    CHECK(max_abs(partial_trace(abc, 2, {2, 5, 3}).matrix() - c.matrix()) < 1e-13);
  }
}

TEST_CASE("fidelity examples") {
  std::mt19937_64 rng(13);
  const auto psi = vvs::testing::random_state(rng, 4);
  CHECK(fidelity_pure(psi, DensityMatrix::from_pure(psi)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity_pure(polarization_singlet(), DensityMatrix::maximally_mixed(4)) ==
        doctest::Approx(0.25).epsilon(1e-14));
  for (double v : {0.0, 0.25, 0.9693, 1.0}) {
    const DensityMatrix w(werner_by_hand(v));
    CHECK(fidelity_pure(polarization_singlet(), w) == doctest::Approx(v + (1.0 - v) / 4.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(fidelity_pure(ket_h(), DensityMatrix::maximally_mixed(4)), DimensionError);
}

TEST_CASE("purity examples") {
  std::mt19937_64 rng(14);
  CHECK(purity(DensityMatrix::from_pure(vvs::testing::random_state(rng, 4))) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(purity(DensityMatrix::maximally_mixed(4)) == doctest::Approx(0.25).epsilon(1e-14));
  const double v = 0.9693;
  CHECK(purity(DensityMatrix(werner_by_hand(v))) == doctest::Approx((1.0 + 3.0 * v * v) / 4.0).epsilon(1e-13));
}

TEST_CASE("fidelity and purity agree with eigendecomposition formulas") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = vvs::testing::random_density(rng, 4, 1 + static_cast<std::size_t>(trial % 4));
    const auto psi = vvs::testing::random_state(rng, 4);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
    double f = 0.0, p = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) {
      const double lambda = es.eigenvalues()(i);
      f += lambda * std::norm(es.eigenvectors().col(i).dot(psi.amplitudes()));
      p += lambda * lambda;
    }
    CHECK(std::abs(fidelity_pure(psi, rho) - f) < 1e-10);
    CHECK(std::abs(purity(rho) - p) < 1e-10);
  }
}

TEST_CASE("expectation examples") {
  const ModeOperator zz(kron(pauli_z(), pauli_z()), OperatorKind::hermitian);
  const ModeOperator xx(kron(pauli_x(), pauli_x()), OperatorKind::hermitian);
  const ModeOperator yy(kron(pauli_y(), pauli_y()), OperatorKind::hermitian);
  const DensityMatrix singlet = DensityMatrix::from_pure(polarization_singlet());
  CHECK(expectation(singlet, zz) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(expectation(DensityMatrix::maximally_mixed(4), xx)) < 1e-15);
  for (double v : {0.2, 0.9693}) {
    const DensityMatrix w(werner_by_hand(v));
    for (const auto* op : {&xx, &yy, &zz}) CHECK(expectation(w, *op) == doctest::Approx(-v).epsilon(1e-13));
  }
  const ModeOperator u(pauli_x() * std::exp(cplx(0.0, 0.3)), OperatorKind::unitary);
  CHECK_THROWS_AS(expectation(DensityMatrix::maximally_mixed(2), u), DomainError);
  CHECK_THROWS_AS(expectation(singlet, ModeOperator(pauli_z(), OperatorKind::hermitian)), DimensionError);
}

TEST_CASE("constructors reject values that break invariants") {
  CVector bad(2);
  bad << 1.0, 1e-5;
  CHECK_THROWS_AS(StateVector{bad}, DomainError);
  CHECK_THROWS_AS(StateVector::normalized(CVector::Zero(3)), DomainError);
  CHECK_NOTHROW(StateVector::normalized(bad));

  CMatrix non_hermitian = CMatrix::Identity(2, 2) / 2.0;
  non_hermitian(0, 1) = 1e-6;
  CHECK_THROWS_AS(DensityMatrix{non_hermitian}, DomainError);

  CHECK_THROWS_AS(DensityMatrix{CMatrix::Identity(2, 2) * 0.6}, DomainError);

  CMatrix negative(2, 2);
  negative << 1.1, 0.0, 0.0, -0.1;
  CHECK_THROWS_AS(DensityMatrix{negative}, DomainError);

  CMatrix barely_negative(2, 2);
  barely_negative << 1.0 + 5e-11, 0.0, 0.0, -5e-11;
  CHECK_NOTHROW(DensityMatrix{barely_negative});

  CHECK_THROWS_AS(ModeOperator(CMatrix::Identity(2, 2) * 1.01, OperatorKind::unitary), DomainError);
  CHECK_THROWS_AS(ModeOperator(pauli_x(), OperatorKind::projector), DomainError);
  CHECK_THROWS_AS(ModeOperator(CMatrix::Zero(2, 3), OperatorKind::hermitian), DimensionError);
  CHECK_NOTHROW(ModeOperator((CMatrix::Identity(2, 2) + pauli_z()) / 2.0, OperatorKind::projector));

  CHECK_THROWS_AS((BlochVector{0, 0, 0}).normalized(), DomainError);
}

TEST_CASE("operator conjugation and trace distance") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = vvs::testing::random_density(rng, 4);
    const CMatrix h = vvs::testing::random_matrix(rng, 4, 4);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h + h.adjoint());
    const CMatrix phases = (cplx(0.0, 1.0) * es.eigenvalues().cast<cplx>()).array().exp().matrix().asDiagonal();
    const ModeOperator u(es.eigenvectors() * phases * es.eigenvectors().adjoint(), OperatorKind::unitary);
    const DensityMatrix out = u.conjugate(rho);
    CHECK(purity(out) == doctest::Approx(purity(rho)).epsilon(1e-12));
    CHECK(trace_distance(out, out) < 1e-14);
    CHECK(trace_distance(u.conjugate(rho), u.conjugate(DensityMatrix::maximally_mixed(4))) ==
          doctest::Approx(trace_distance(rho, DensityMatrix::maximally_mixed(4))).epsilon(1e-10));
  }
  CHECK(trace_distance(DensityMatrix::from_pure(ket_h()), DensityMatrix::from_pure(ket_v())) ==
        doctest::Approx(1.0));
}

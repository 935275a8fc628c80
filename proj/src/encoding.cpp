#include "vvs/encoding.hpp"

#include <cmath>
#include <string>

namespace vvs {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kConfinementTol = 1e-12;
const cplx kI(0.0, 1.0);

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

StateVector pol_ket(cplx h, cplx v) {
  CVector a(2);
  a << h, v;
  return StateVector(a);
}

CVector circular_pol(Circular c) {
  CVector a(2);
  if (c == Circular::L)
    a << kInvSqrt2, kI * kInvSqrt2;
  else
    a << kInvSqrt2, -kI * kInvSqrt2;
  return a;
}

void check_outcome(int outcome) {
  if (outcome != 1 && outcome != -1) throw DomainError("analyzer outcome must be +1 or -1");
}

void check_direction(const BlochVector& u) {
  if (!u.is_unit()) throw DomainError("measurement direction must be a unit vector");
}

// Hermitian involution C of the ideal plate.
CMatrix conversion_matrix(const QPlate& qp, const OamSpace& space) {
  const std::size_t d = photon_dim(space);
  const int s = qp.shift();
  const cplx phase = std::exp(2.0 * kI * qp.phase_offset);
  CMatrix c = CMatrix::Zero(idx(d), idx(d));
  for (int l = space.l_min; l <= space.l_max; ++l) {
    const CVector lin = circular_ket(Circular::L, l, space).amplitudes();
    const CVector rin = circular_ket(Circular::R, l, space).amplitudes();
    if (space.contains(l + s))
      c += phase * circular_ket(Circular::R, l + s, space).amplitudes() * lin.adjoint();
    else
      c += lin * lin.adjoint();
    if (space.contains(l - s))
      c += std::conj(phase) * circular_ket(Circular::L, l - s, space).amplitudes() * rin.adjoint();
    else
      c += rin * rin.adjoint();
  }
  return c;
}

}  // namespace

std::size_t OamSpace::index(int l) const {
  if (!contains(l)) throw DomainError("OAM value " + std::to_string(l) + " outside the space");
  return static_cast<std::size_t>(l - l_min);
}

void OamSpace::validate() const {
  if (l_min > l_max) throw DomainError("OAM space needs l_min <= l_max");
}

std::size_t photon_index(const OamSpace& space, int pol, int l) {
  if (pol != 0 && pol != 1) throw DomainError("polarization index must be 0 (H) or 1 (V)");
  return static_cast<std::size_t>(pol) * space.dim() + space.index(l);
}

void QPlate::validate() const {
  const double two_q = 2.0 * q;
  if (std::abs(two_q - std::round(two_q)) > 1e-12 || std::round(two_q) == 0.0)
    throw DomainError("q-plate charge must be a nonzero half-integer");
  if (!(conversion_efficiency >= 0.0 && conversion_efficiency <= 1.0))
    throw DomainError("q-plate conversion efficiency must lie in [0,1]");
}

int QPlate::shift() const { return static_cast<int>(std::lround(2.0 * q)); }

StateVector ket_h() { return pol_ket(1.0, 0.0); }
StateVector ket_v() { return pol_ket(0.0, 1.0); }
StateVector ket_d() { return pol_ket(kInvSqrt2, kInvSqrt2); }
StateVector ket_a() { return pol_ket(kInvSqrt2, -kInvSqrt2); }
StateVector ket_l() { return StateVector(circular_pol(Circular::L)); }
StateVector ket_r() { return StateVector(circular_pol(Circular::R)); }

StateVector photon_ket(const StateVector& pol, int l, const OamSpace& space) {
  if (pol.dim() != 2) throw DimensionError("polarization ket must have dimension 2");
  space.validate();
  return tensor(pol, StateVector::basis(space.dim(), space.index(l)));
}

StateVector circular_ket(Circular c, int l, const OamSpace& space) {
  return photon_ket(StateVector(circular_pol(c)), l, space);
}

LogicalVortexQubit logical_qubit(const OamSpace& space) {
  return {circular_ket(Circular::L, -1, space), circular_ket(Circular::R, 1, space)};
}

StateVector polarization_singlet() {
  CVector a = CVector::Zero(4);
  a(1) = kInvSqrt2;   // |H V>
  a(2) = -kInvSqrt2;  // |V H>
  return StateVector(a);
}

DensityMatrix werner_state(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("Werner visibility must lie in [0,1]");
  return DensityMatrix::mixture(v, DensityMatrix::from_pure(polarization_singlet()),
                                DensityMatrix::maximally_mixed(4));
}

double werner_v_from_fidelity(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0))
    throw DomainError("Werner singlet fidelity must lie in [1/4, 1]");
  return (4.0 * fidelity - 1.0) / 3.0;
}

ModeOperator qplate_operator(const QPlate& qp, const OamSpace& space) {
  qp.validate();
  space.validate();
  const CMatrix c = conversion_matrix(qp, space);
  const double eta = qp.conversion_efficiency;
  if (eta == 1.0) return ModeOperator(c, OperatorKind::unitary);
  const auto eye = CMatrix::Identity(c.rows(), c.cols());
  return ModeOperator(std::sqrt(eta) * c + kI * std::sqrt(1.0 - eta) * eye, OperatorKind::unitary);
}

StateVector apply_qplate(const QPlate& qp, const OamSpace& space, const StateVector& psi) {
  if (psi.dim() != photon_dim(space)) throw DimensionError("state does not live on pol (x) OAM");
  const int s = qp.shift();
  const CVector& a = psi.amplitudes();
  for (int l = space.l_min; l <= space.l_max; ++l) {
    const bool l_exits = !space.contains(l + s);
    const bool r_exits = !space.contains(l - s);
    const double wl = std::norm(a.dot(circular_ket(Circular::L, l, space).amplitudes()));
    const double wr = std::norm(a.dot(circular_ket(Circular::R, l, space).amplitudes()));
    if ((l_exits && wl > kConfinementTol) || (r_exits && wr > kConfinementTol))
      throw DomainError("q-plate would push amplitude at l=" + std::to_string(l) +
                        " outside the OAM space");
  }
  return qplate_operator(qp, space).apply(psi);
}

RotationGenerator rotation_generator(const OamSpace& space) {
  space.validate();
  const std::size_t d = photon_dim(space);
  RotationGenerator g{CMatrix(idx(d), idx(d)), {}};
  g.j.reserve(d);
  Eigen::Index col = 0;
  for (Circular c : {Circular::L, Circular::R})
    for (int l = space.l_min; l <= space.l_max; ++l) {
      g.basis.col(col++) = circular_ket(c, l, space).amplitudes();
      g.j.push_back((c == Circular::L ? 1 : -1) + l);
    }
  return g;
}

ModeOperator rotation_operator(double theta, const OamSpace& space) {
  const RotationGenerator g = rotation_generator(space);
  CVector phases(g.basis.cols());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(-kI * (static_cast<double>(g.j[static_cast<std::size_t>(i)]) * theta));
  return ModeOperator(g.basis * phases.asDiagonal() * g.basis.adjoint(), OperatorKind::unitary);
}

CMatrix encoding_isometry(const QPlate& qp, const OamSpace& space) {
  if (!space.contains(0)) throw DomainError("OAM space must contain l = 0");
  const CMatrix u = qplate_operator(qp, space).matrix();
  CMatrix e(u.rows(), 2);
  e.col(0) = u * photon_ket(ket_h(), 0, space).amplitudes();
  e.col(1) = u * photon_ket(ket_v(), 0, space).amplitudes();
  return e;
}

StateVector encode_to_vortex(const StateVector& pol_qubit, const OamSpace& space, const QPlate& qp) {
  if (pol_qubit.dim() != photon_dim(space)) throw DimensionError("state does not live on pol (x) OAM");
  const CVector& a = pol_qubit.amplitudes();
  const std::size_t l0 = space.index(0);
  double outside = 0.0;
  for (int l = space.l_min; l <= space.l_max; ++l) {
    if (l == 0) continue;
    for (int p = 0; p < 2; ++p) outside += std::norm(a(idx(photon_index(space, p, l))));
  }
  if (outside > kConfinementTol) throw DomainError("encode_to_vortex input is not confined to l = 0");
  CVector pol(2);
  pol << a(idx(l0)), a(idx(space.dim() + l0));
  return StateVector(encoding_isometry(qp, space) * pol);
}

DensityMatrix encode_bob_photon(const DensityMatrix& two_photon_pol, const OamSpace& space,
                                const QPlate& qp) {
  if (two_photon_pol.dim() != 4) throw DimensionError("expected a two-qubit polarization state");
  const CMatrix k = kron(CMatrix::Identity(2, 2), encoding_isometry(qp, space));
  CMatrix out = k * two_photon_pol.matrix() * k.adjoint();
  // Remove rounding asymmetry before validation.
  out = 0.5 * (out + out.adjoint()).eval();
  out /= out.trace().real();
  return DensityMatrix(std::move(out));
}

StateVector vortex_singlet(const OamSpace& space) {
  const CMatrix k = kron(CMatrix::Identity(2, 2), encoding_isometry(QPlate{}, space));
  return StateVector::normalized(k * polarization_singlet().amplitudes());
}

CMatrix polarization_observable(const BlochVector& u) {
  // Frame: +x = H, +y = D, +z = L, i.e. standard (sigma_z, sigma_x, sigma_y).
  return u.x * pauli_z() + u.y * pauli_x() + u.z * pauli_y();
}

ModeOperator polarization_projector(const BlochVector& u, int outcome) {
  check_direction(u);
  check_outcome(outcome);
  return ModeOperator(0.5 * (CMatrix::Identity(2, 2) + outcome * polarization_observable(u)),
                      OperatorKind::projector);
}

ModeOperator bob_polarization_analyzer(const BlochVector& direction, double theta, int outcome) {
  const CMatrix r = rotation_operator(theta, OamSpace::gaussian()).matrix();
  const CMatrix p = polarization_projector(direction, outcome).matrix();
  CMatrix m = r * p * r.adjoint();
  return ModeOperator(0.5 * (m + m.adjoint()), OperatorKind::projector);
}

ModeOperator bob_analyzer(const BlochVector& direction, double theta, int outcome,
                          const OamSpace& space, const QPlate& qp) {
  const CMatrix pol = polarization_projector(direction, outcome).matrix();
  CMatrix gauss = CMatrix::Zero(idx(space.dim()), idx(space.dim()));
  gauss(idx(space.index(0)), idx(space.index(0))) = 1.0;
  const CMatrix u = qplate_operator(qp, space).matrix();
  const CMatrix r = rotation_operator(theta, space).matrix();
  CMatrix m = r * u.adjoint() * kron(pol, gauss) * u * r.adjoint();
  return ModeOperator(0.5 * (m + m.adjoint()), OperatorKind::projector);
}

ModeOperator bob_null_projector(double theta, const OamSpace& space, const QPlate& qp) {
  const BlochVector z{0.0, 0.0, 1.0};
  const CMatrix detected =
      bob_analyzer(z, theta, 1, space, qp).matrix() + bob_analyzer(z, theta, -1, space, qp).matrix();
  return ModeOperator(CMatrix::Identity(detected.rows(), detected.cols()) - detected,
                      OperatorKind::projector);
}

}  // namespace vvs

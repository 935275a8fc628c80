// Polarization and OAM mode spaces, the q-plate, beam-axis rotations and the
// vector vortex qubit.
//
// Conventions (pinned by tests):
//   * polarization computational basis is {|H>, |V>} (index 0, 1);
//   * |H> = (|L> + |R>)/sqrt2, |V> = -i(|L> - |R>)/sqrt2;
//   * a photon lives in pol (x) OAM with the polarization index major;
//   * rotating the apparatus by theta about the beam axis acts as
//     exp(-i theta J), J = s + l with s(L) = +1 and s(R) = -1, so |L,-1> and
//     |R,+1> carry J = 0 and are fixed;
//   * polarization Bloch frame: +z = |L>, +x = |H>, +y = |D>.
#pragma once

#include <cstddef>
#include <vector>

#include "vvs/qmath.hpp"

namespace vvs {

enum class Encoding { polarization, vortex };

enum class Circular { L, R };

/// Inclusive range of OAM quantum numbers l (units of hbar per photon).
struct OamSpace {
  int l_min = -2;
  int l_max = 2;

  std::size_t dim() const { return static_cast<std::size_t>(l_max - l_min + 1); }
  bool contains(int l) const { return l >= l_min && l <= l_max; }
  std::size_t index(int l) const;
  /// Throws DomainError if l_min > l_max.
  void validate() const;
  /// Only l = 0; the space of a polarization-only photon.
  static OamSpace gaussian() { return {0, 0}; }
};

/// Index into pol (x) OAM.
std::size_t photon_index(const OamSpace& space, int pol, int l);
inline std::size_t photon_dim(const OamSpace& space) { return 2 * space.dim(); }

struct QPlate {
  double q = 0.5;
  double phase_offset = 0.0;
  /// 1 is a perfectly tuned plate; smaller values leave part of the beam
  /// unconverted (U = sqrt(eta) C + i sqrt(1-eta) I).
  double conversion_efficiency = 1.0;

  /// 2q must be a nonzero integer and the efficiency in [0,1].
  void validate() const;
  int shift() const;  // 2q
};

struct LogicalVortexQubit {
  StateVector zero_ket;  // |L, l=-1>
  StateVector one_ket;   // |R, l=+1>
};

// Polarization kets (dimension 2).
StateVector ket_h();
StateVector ket_v();
StateVector ket_d();
StateVector ket_a();
StateVector ket_l();
StateVector ket_r();

/// |pol> (x) |l> on pol (x) OAM.
StateVector photon_ket(const StateVector& pol, int l, const OamSpace& space);
StateVector circular_ket(Circular c, int l, const OamSpace& space);

LogicalVortexQubit logical_qubit(const OamSpace& space = {});

/// (|H>_a|V>_b - |V>_a|H>_b)/sqrt2.
StateVector polarization_singlet();

/// Werner mixture v |Psi-_p><Psi-_p| + (1-v) I/4.
DensityMatrix werner_state(double v);

/// Werner visibility whose singlet fidelity equals `fidelity`.
double werner_v_from_fidelity(double fidelity);

/// The q-plate mode map on pol (x) OAM: |L,l> -> e^{2i a}|R,l+2q>,
/// |R,l> -> e^{-2i a}|L,l-2q>, mixed with the identity when detuned. Modes
/// whose image would leave the truncated range are left in place, which keeps
/// the matrix unitary; apply_qplate refuses states that populate them.
ModeOperator qplate_operator(const QPlate& qp, const OamSpace& space);

/// Applies the plate; throws DomainError if psi carries amplitude on a mode
/// that the plate would push outside the OAM range.
StateVector apply_qplate(const QPlate& qp, const OamSpace& space, const StateVector& psi);

/// Eigenbasis of the beam-axis rotation: rotation(theta) = W diag(e^{-i j theta}) W^dagger.
struct RotationGenerator {
  CMatrix basis;          // columns are |c,l> in pol (x) OAM coordinates
  std::vector<int> j;     // total angular momentum of each column
};
RotationGenerator rotation_generator(const OamSpace& space);

ModeOperator rotation_operator(double theta, const OamSpace& space);

/// Pol qubit at l = 0 -> pol (x) OAM after one pass through the plate.
/// A 2-column isometry (photon_dim(space) x 2).
CMatrix encoding_isometry(const QPlate& qp, const OamSpace& space);

/// Converts a pol (x) OAM state confined to l = 0 into the vortex encoding.
StateVector encode_to_vortex(const StateVector& pol_qubit, const OamSpace& space = {},
                             const QPlate& qp = {});

/// Two-photon state with Bob's photon passed through the encoding plate:
/// (I_2 (x) E) rho (I_2 (x) E)^dagger with E = encoding_isometry.
DensityMatrix encode_bob_photon(const DensityMatrix& two_photon_pol, const OamSpace& space = {},
                                const QPlate& qp = {});

/// encode_bob_photon applied to the polarization singlet.
StateVector vortex_singlet(const OamSpace& space = {});

/// u . sigma in the polarization Bloch frame (2x2, H/V basis).
CMatrix polarization_observable(const BlochVector& u);

/// (I + outcome * u . sigma)/2.
ModeOperator polarization_projector(const BlochVector& u, int outcome);

/// Bob's polarization-only analyzer rotated by theta.
ModeOperator bob_polarization_analyzer(const BlochVector& direction, double theta, int outcome);

/// Bob's vortex receiver: R(theta) QP^dagger (Pi_{u,outcome} (x) |0><0|) QP R(theta)^dagger.
ModeOperator bob_analyzer(const BlochVector& direction, double theta, int outcome,
                          const OamSpace& space = {}, const QPlate& qp = {});

/// Complement of both analyzer outcomes: light that fails to couple back into l = 0.
ModeOperator bob_null_projector(double theta, const OamSpace& space = {}, const QPlate& qp = {});

}  // namespace vvs

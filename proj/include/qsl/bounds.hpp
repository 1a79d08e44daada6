#pragma once

// Closed-form speed limits, the Hamiltonians that saturate them, and checkers.
//
// Times are normalised so that E multiplies t: a bound with constant g reads
// T >= g / E, where E = Tr[H]/d - E_0 is the mean energy above the ground
// state.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/linalg.hpp"
#include "qsl/states.hpp"

namespace qsl {

enum class BoundKind { Lower, Upper };
enum class Tightness { Tight, NotTight, Unknown };

std::string_view to_string(BoundKind k);
std::string_view to_string(Tightness t);

struct BoundReport {
  double value = 0.0;  // g / E
  BoundKind kind = BoundKind::Lower;
  Tightness tight = Tightness::Unknown;
  double g = 0.0;
  std::string source;
  std::string note;
};

// Throws InvalidArgument unless energy > 0.
BoundReport make_bound(double g, double energy, BoundKind kind, Tightness tight,
                       std::string source, std::string note = {});

struct TransformCheck {
  bool achieved = false;
  double max_column_error = 0.0;
  std::vector<double> recovered_phases;
};

// Tr[H]/d - E_0.
double mean_energy(const HermitianOperator& h);

// --- single qubit -------------------------------------------------------

BoundReport qubit_transition_bound(const BlochVector& r0, const BlochVector& r1, double energy);

// H = E n.sigma + E 1 with n along r0 x r1; rotates r0 onto r1 in the bound time.
HermitianOperator optimal_qubit_hamiltonian(const BlochVector& r0, const BlochVector& r1,
                                            double energy);

// Trace form of the qubit bound; throws MaximallyMixedInput for zero Bloch radius.
BoundReport mixed_qubit_bound(const ComplexMatrix& rho0, const ComplexMatrix& rho1, double energy);

// --- pure states --------------------------------------------------------

enum class PureBoundMode { MeanEnergy, Gap };

// arccos(2|<psi0|psi1>|^2 - 1) divided by d E (MeanEnergy) or by E_gap (Gap).
BoundReport pure_state_bound(std::span<const cplx> psi0, std::span<const cplx> psi1,
                             double energy, PureBoundMode mode);

struct FminResult {
  double value = 1.0;
  StateVector psi_min;
};

// Minimal |<psi|e^{-iHt}|psi>| for 0 <= t <= pi / E_gap; throws TimeOutOfRange.
FminResult fmin(const HermitianOperator& h, double t);

// --- unbiased bases -----------------------------------------------------

// Best known lower bound for computational -> unbiased in dimension d.
BoundReport unbiased_bound(std::size_t d, double energy);

// Strict general-d lower bound pi (d-1) / (4 d E).
BoundReport general_unbiased_bound(std::size_t d, double energy);

// arccos((4 - sqrt 6)/2) / 3, the d = 6 constant.
double d6_bound_constant();

// Conjectured tight limit 4 pi / (9E) for the tilde qutrit class.
BoundReport qutrit_tilde_bound(double energy);

struct NQubitBounds {
  BoundReport interacting;      // pi / (2E), Hadamard-on-all-qubits Hamiltonian
  BoundReport non_interacting;  // n pi / (4E), every qubit rotated independently
};

NQubitBounds nqubit_upper_bound(std::size_t n, double energy);

// Cyclic shift |n> -> |n+1 mod d>.
BoundReport perm_bound(std::size_t d, double energy);
ComplexMatrix cyclic_shift(std::size_t d);

struct ConstraintCheck {
  double value = 0.0;  // sum_i cos(E_i t)
  bool satisfied = false;
};

// Necessary condition |sum_i cos(E_i t)| <= sqrt(d) for reaching an unbiased basis.
ConstraintCheck constraint_check(const HermitianOperator& h, double t);

// --- optimal Hamiltonians -----------------------------------------------

enum class OptimalKind { QutritPlus, QutritTilde, TwoQubit, NQubitHadamard };

OptimalKind parse_optimal_kind(std::string_view name);  // throws BadKind

// n is only used by NQubitHadamard.
HermitianOperator construct_optimal(OptimalKind kind, std::size_t n = 1);

// Rank-one projector |phi><phi| taking psi0 to psi1 (up to phase) at
// t = arccos(2|<psi0|psi1>|^2 - 1).
HermitianOperator construct_optimal_pure(std::span<const cplx> psi0, std::span<const cplx> psi1);

// |00>,|01>,|10>,|11> -> |++>,|-+>,|+->,|-->.
OrderedBasis two_qubit_unbiased_target();

// |<0|e^{-iHt}|0>|^2 = (5 + 4 cos t)/9 for the qutrit plus Hamiltonian.
double plus_return_fidelity(double t);

// e^{-iHt} src_j = e^{i phi_j} dst_j for every j, within tol on |overlap|.
TransformCheck achieves_transform(const HermitianOperator& h, double t, const OrderedBasis& src,
                                  const OrderedBasis& dst, double tol = 1e-9);

struct SaturationCase {
  std::string name;
  HermitianOperator hamiltonian;
  double et = 0.0;  // product E t at which the transform completes
  double time = 0.0;
  OrderedBasis target;
};

// Every explicit optimal Hamiltonian with its target basis and saturation time.
std::vector<SaturationCase> saturation_suite(std::size_t max_qubits = 8);

// V H V^dagger for V = diag(e^{i phases}).
HermitianOperator conjugate_hamiltonian(const HermitianOperator& h, std::span<const double> phases);
// Throws NotDiagonalUnitary.
HermitianOperator conjugate_hamiltonian(const HermitianOperator& h, const ComplexMatrix& v);

// --- coherence ----------------------------------------------------------

// |r| cos(arcsin(|r_z|/|r|) - 2Et), clamped at |r| once t >= T_mc.
double coherence_max_qubit(const ComplexMatrix& rho, double energy, double t);
// arcsin(|r_z|/|r|) / (2E).
double t_mc(const ComplexMatrix& rho, double energy);
// Rotation axis orthogonal to r and z that drives r towards the xy plane.
std::array<double, 3> optimal_coherence_axis(const ComplexMatrix& rho);
// E n.sigma + E 1.
HermitianOperator qubit_axis_hamiltonian(const std::array<double, 3>& axis, double energy);

// Lower bound on the time from psi to any maximally coherent state.
BoundReport mc_speed_limit(std::span<const cplx> psi, double energy);

// arccos F(rho, sigma) / min(Delta E_rho, E_rho).
double reference_mixed_bound(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                             const HermitianOperator& h);

}  // namespace qsl

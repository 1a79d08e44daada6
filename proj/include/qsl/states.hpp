#pragma once

// Bases, unbiasedness, the qutrit unbiased-basis classes, Bloch vectors and
// l1 coherence.

#include <array>
#include <string_view>

#include "qsl/linalg.hpp"

namespace qsl {

// Ordered orthonormal basis; column j is the j-th basis vector.
class OrderedBasis {
 public:
  // Throws NotUnitary when the columns are not orthonormal within tol.
  explicit OrderedBasis(ComplexMatrix columns, double tol = 1e-10);

  std::size_t dim() const noexcept { return columns_.dim(); }
  const ComplexMatrix& columns() const noexcept { return columns_; }
  StateVector vector(std::size_t j) const { return columns_.column(j); }

 private:
  ComplexMatrix columns_;
};

struct BlochVector {
  std::array<double, 3> r{};

  double radius() const;
};

enum class BasisKind { Computational, QutritPlus, QutritTilde, Fourier, HadamardN, MaxCoherentFlat };

BasisKind parse_basis_kind(std::string_view name);  // throws BadKind

// size is n (qubits) for HadamardN and the dimension d otherwise; the qutrit
// kinds require size 3. MaxCoherentFlat is the Fourier basis, whose first
// column is the flat maximally coherent state.
OrderedBasis standard_basis(BasisKind kind, std::size_t size);

// (1/sqrt d) sum_j e^{i phases_j} |j>; empty phases give the flat state.
StateVector max_coherent_state(std::size_t d, std::span<const double> phases = {});

// Max over all (i, j) of | |<a_i|b_j>|^2 - 1/d | <= tol.
bool is_unbiased(const OrderedBasis& a, const OrderedBasis& b, double tol = 1e-9);

enum class QutritClassTag { Plus, Tilde };

struct QutritClass {
  QutritClassTag tag = QutritClassTag::Plus;
  // alpha_01, alpha_02 of V = diag(1, e^{i alpha_01}, e^{i alpha_02}), in (-pi, pi].
  std::array<double, 2> diagonal_phases{};
  // Global phase of each basis element, in (-pi, pi].
  std::array<double, 3> element_phases{};
};

// Throws NotQutrit or NotUnbiased.
QutritClass classify_qutrit_unbiased(const OrderedBasis& b);

// Inverse of the classifier: column j = e^{i element_j} V |template_j>.
OrderedBasis construct_qutrit_basis(const QutritClass& c);

// Largest violation of |1 + e^{i(a_k1 - a_l1)} + e^{i(a_k2 - a_l2)}| = 3 delta_kl
// over the first-entry-normalised columns of an unbiased qutrit basis.
double qutrit_phase_condition_defect(const OrderedBasis& b);

// Hermitian, unit trace and eigenvalues >= -1e-10.
bool is_density_matrix(const ComplexMatrix& rho, double tol = 1e-10);

// Sum of |rho_ij| over i != j; throws NotDensityMatrix.
double l1_coherence(const ComplexMatrix& rho);

BlochVector bloch_from_state(const ComplexMatrix& rho);  // throws NotQubit
ComplexMatrix state_from_bloch(const BlochVector& r);    // throws InvalidArgument if |r| > 1

// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
StateVector qubit_state(double theta, double phi);

// max over maximally coherent |+>_d of |<psi|+>_d|^2 = (1/d)(sum_j |psi_j|)^2.
double max_mc_overlap(std::span<const cplx> psi);  // throws NotNormalized

void require_normalized(std::span<const cplx> psi, double tol = 1e-10);

}  // namespace qsl

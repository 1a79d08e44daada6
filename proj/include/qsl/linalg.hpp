#pragma once

// Dense complex linear algebra for small Hilbert spaces (d <= 1024).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qsl {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr std::size_t kMaxDim = 1024;

struct Tolerances {
  double hermitian = 1e-12;    // symmetry defect relative to max |entry|
  double equality = 1e-10;     // unitarity, reconstruction, orthonormality
  double phase_group = 1e-9;   // eigenphases closer than this are degenerate
};

// Square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  // Columns given as state vectors; all must have the same length.
  static ComplexMatrix from_columns(std::span<const StateVector> columns);
  static ComplexMatrix outer(std::span<const cplx> ket, std::span<const cplx> bra);

  std::size_t dim() const noexcept { return dim_; }
  cplx& operator()(std::size_t row, std::size_t col) { return a_[row * dim_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const { return a_[row * dim_ + col]; }
  std::span<const cplx> entries() const noexcept { return a_; }

  StateVector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const cplx> v);
  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  // Largest |this - other| entry.
  double max_diff(const ComplexMatrix& other) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
  friend StateVector operator*(const ComplexMatrix& m, std::span<const cplx> v);

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> a_;
};

// <a|b>, conjugating the first argument.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> v);

// Pauli matrices, index 0..2 for x, y, z.
ComplexMatrix pauli(int axis);
ComplexMatrix hadamard();

// Hermitian matrix with its ascending eigensystem.
class HermitianOperator {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  // Column j is the eigenvector of eigenvalues()[j].
  const ComplexMatrix& eigenvectors() const noexcept { return eigenvectors_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }

  double ground_energy() const { return eigenvalues_.front(); }
  double max_energy() const { return eigenvalues_.back(); }
  double gap() const { return max_energy() - ground_energy(); }

 private:
  friend HermitianOperator hermitian_eig(const ComplexMatrix&, const Tolerances&);
  HermitianOperator(ComplexMatrix m, std::vector<double> vals, ComplexMatrix vecs)
      : matrix_(std::move(m)), eigenvalues_(std::move(vals)), eigenvectors_(std::move(vecs)) {}

  ComplexMatrix matrix_;
  std::vector<double> eigenvalues_;
  ComplexMatrix eigenvectors_;
};

// Unitary with eigenvalues exp(-i * phase), phases principal in (-pi, pi] and ascending.
class UnitaryOperator {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::span<const double> eigenphases() const noexcept { return phases_; }
  const ComplexMatrix& eigenvectors() const noexcept { return eigenvectors_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }

 private:
  friend UnitaryOperator mat_exp(const HermitianOperator&, double);
  friend UnitaryOperator unitary_eigphases(const ComplexMatrix&, const Tolerances&);
  UnitaryOperator(ComplexMatrix m, std::vector<double> phases, ComplexMatrix vecs)
      : matrix_(std::move(m)), phases_(std::move(phases)), eigenvectors_(std::move(vecs)) {}

  ComplexMatrix matrix_;
  std::vector<double> phases_;
  ComplexMatrix eigenvectors_;
};

// Maps an angle onto (-pi, pi].
double principal_angle(double angle);

bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12);
bool is_unitary(const ComplexMatrix& m, double tol = 1e-10);

// Cyclic Jacobi; throws NotHermitian or NoConvergence.
HermitianOperator hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {});

// exp(-i H t) built from the eigensystem of H.
UnitaryOperator mat_exp(const HermitianOperator& h, double t);

// Eigendecomposition of a unitary; throws NotUnitary.
UnitaryOperator unitary_eigphases(const ComplexMatrix& u, const Tolerances& tol = {});

// Principal k-th root: exp(-i alpha_j) -> exp(-i alpha_j / k).
ComplexMatrix unitary_root(const UnitaryOperator& u, int k);

// Throws DimensionOverflow above kMaxDim.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Reassemble V diag(values) V^dagger.
ComplexMatrix spectral_compose(const ComplexMatrix& vecs, std::span<const cplx> values);

}  // namespace qsl

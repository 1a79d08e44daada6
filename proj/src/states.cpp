#include "qsl/states.hpp"

#include <cmath>
#include <string>

#include "qsl/error.hpp"

namespace qsl {

namespace {

constexpr double kThird = 2.0 * kPi / 3.0;

// Offsets k_j in e^{i a_m} w^{m k_j}, w = e^{i 2pi/3}, for columns 0..2.
constexpr std::array<int, 3> kPlusOffsets = {1, 0, -1};
constexpr std::array<int, 3> kTildeOffsets = {-1, 0, 1};

const std::array<int, 3>& offsets(QutritClassTag tag) {
  return tag == QutritClassTag::Plus ? kPlusOffsets : kTildeOffsets;
}

StateVector qutrit_template(QutritClassTag tag, const std::array<double, 2>& v, std::size_t j) {
  const double r = 1.0 / std::sqrt(3.0);
  const int k = offsets(tag)[j];
  return {r, r * std::polar(1.0, v[0] + kThird * k), r * std::polar(1.0, v[1] + 2.0 * kThird * k)};
}

OrderedBasis fourier(std::size_t d) {
  ComplexMatrix m(d);
  const double r = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      m(j, k) = r * std::polar(1.0, 2.0 * kPi * static_cast<double>((j * k) % d) / d);
  return OrderedBasis(std::move(m));
}

}  // namespace

OrderedBasis::OrderedBasis(ComplexMatrix columns, double tol) : columns_(std::move(columns)) {
  if (!is_unitary(columns_.adjoint(), tol))
    throw Error(Errc::NotUnitary, "basis columns are not orthonormal");
}

double BlochVector::radius() const { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

BasisKind parse_basis_kind(std::string_view name) {
  if (name == "computational") return BasisKind::Computational;
  if (name == "qutrit_plus" || name == "plus") return BasisKind::QutritPlus;
  if (name == "qutrit_tilde" || name == "tilde") return BasisKind::QutritTilde;
  if (name == "fourier") return BasisKind::Fourier;
  if (name == "hadamard_n") return BasisKind::HadamardN;
  if (name == "max_coherent_flat") return BasisKind::MaxCoherentFlat;
  throw Error(Errc::BadKind, "unknown basis kind '" + std::string(name) + "'");
}

OrderedBasis standard_basis(BasisKind kind, std::size_t size) {
  switch (kind) {
    case BasisKind::Computational:
      return OrderedBasis(ComplexMatrix::identity(size));
    case BasisKind::QutritPlus:
    case BasisKind::QutritTilde: {
      if (size != 3) throw Error(Errc::NotQutrit, "qutrit bases need d = 3");
      const auto tag = kind == BasisKind::QutritPlus ? QutritClassTag::Plus : QutritClassTag::Tilde;
      return construct_qutrit_basis(QutritClass{tag, {0.0, 0.0}, {0.0, 0.0, 0.0}});
    }
    case BasisKind::Fourier:
    case BasisKind::MaxCoherentFlat:
      return fourier(size);
    case BasisKind::HadamardN: {
      if (size < 1) throw Error(Errc::BadDimension, "hadamard_n needs n >= 1");
      ComplexMatrix m = hadamard();
      for (std::size_t i = 1; i < size; ++i) m = kron(m, hadamard());
      return OrderedBasis(std::move(m));
    }
  }
  throw Error(Errc::BadKind, "unknown basis kind");
}

StateVector max_coherent_state(std::size_t d, std::span<const double> phases) {
  if (!phases.empty() && phases.size() != d) throw Error(Errc::DimMismatch, "phase count != d");
  const double r = 1.0 / std::sqrt(static_cast<double>(d));
  StateVector v(d);
  for (std::size_t j = 0; j < d; ++j) v[j] = phases.empty() ? cplx{r, 0.0} : std::polar(r, phases[j]);
  return v;
}

bool is_unbiased(const OrderedBasis& a, const OrderedBasis& b, double tol) {
  if (a.dim() != b.dim()) throw Error(Errc::DimMismatch, "bases of different dimension");
  const double target = 1.0 / static_cast<double>(a.dim());
  const ComplexMatrix overlaps = a.columns().adjoint() * b.columns();
  for (const cplx& z : overlaps.entries())
    if (std::abs(std::norm(z) - target) > tol) return false;
  return true;
}

QutritClass classify_qutrit_unbiased(const OrderedBasis& b) {
  if (b.dim() != 3) throw Error(Errc::NotQutrit, "classification needs d = 3");
  if (!is_unbiased(standard_basis(BasisKind::Computational, 3), b, 1e-9))
    throw Error(Errc::NotUnbiased, "basis is not unbiased to the computational basis");

  const auto& m = b.columns();
  QutritClass out;
  for (std::size_t j = 0; j < 3; ++j) out.element_phases[j] = principal_angle(std::arg(m(0, j)));
  // V is read off the middle element, whose template is (1, 1, 1).
  const cplx strip = std::polar(1.0, -out.element_phases[1]);
  out.diagonal_phases = {principal_angle(std::arg(m(1, 1) * strip)),
                         principal_angle(std::arg(m(2, 1) * strip))};

  double best = 1e300;
  for (QutritClassTag tag : {QutritClassTag::Plus, QutritClassTag::Tilde}) {
    double err = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      const StateVector t = qutrit_template(tag, out.diagonal_phases, j);
      const cplx g = std::polar(1.0, out.element_phases[j]);
      for (std::size_t i = 0; i < 3; ++i) err = std::max(err, std::abs(m(i, j) - g * t[i]));
    }
    if (err < best) {
      best = err;
      out.tag = tag;
    }
  }
  if (best > 1e-8) throw Error(Errc::NotUnbiased, "basis matches neither qutrit class");
  return out;
}

OrderedBasis construct_qutrit_basis(const QutritClass& c) {
  ComplexMatrix m(3);
  for (std::size_t j = 0; j < 3; ++j) {
    StateVector t = qutrit_template(c.tag, c.diagonal_phases, j);
    const cplx g = std::polar(1.0, c.element_phases[j]);
    for (auto& z : t) z *= g;
    m.set_column(j, t);
  }
  return OrderedBasis(std::move(m));
}

double qutrit_phase_condition_defect(const OrderedBasis& b) {
  if (b.dim() != 3) throw Error(Errc::NotQutrit, "condition defined for d = 3");
  std::array<std::array<double, 2>, 3> alpha{};
  for (std::size_t k = 0; k < 3; ++k) {
    const cplx first = b.columns()(0, k);
    alpha[k] = {std::arg(b.columns()(1, k) / first), std::arg(b.columns()(2, k) / first)};
  }
  double defect = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t l = 0; l < 3; ++l) {
      const cplx s = 1.0 + std::polar(1.0, alpha[k][0] - alpha[l][0]) +
                     std::polar(1.0, alpha[k][1] - alpha[l][1]);
      defect = std::max(defect, std::abs(std::abs(s) - (k == l ? 3.0 : 0.0)));
    }
  }
  return defect;
}

bool is_density_matrix(const ComplexMatrix& rho, double tol) {
  const std::size_t d = rho.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      if (std::abs(rho(i, j) - std::conj(rho(j, i))) > tol) return false;
  if (std::abs(rho.trace() - 1.0) > tol) return false;
  const auto h = hermitian_eig(rho, Tolerances{.hermitian = 1.0});
  return h.ground_energy() >= -tol;
}

double l1_coherence(const ComplexMatrix& rho) {
  if (!is_density_matrix(rho)) throw Error(Errc::NotDensityMatrix, "l1 coherence needs a state");
  double c = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j)
      if (i != j) c += std::abs(rho(i, j));
  return c;
}

BlochVector bloch_from_state(const ComplexMatrix& rho) {
  if (rho.dim() != 2) throw Error(Errc::NotQubit, "Bloch vectors need d = 2");
  if (!is_density_matrix(rho)) throw Error(Errc::NotDensityMatrix, "not a qubit state");
  BlochVector b;
  for (int k = 0; k < 3; ++k) b.r[k] = (rho * pauli(k)).trace().real();
  return b;
}

ComplexMatrix state_from_bloch(const BlochVector& b) {
  if (b.radius() > 1.0 + 1e-12) throw Error(Errc::InvalidArgument, "|r| > 1");
  ComplexMatrix rho = ComplexMatrix::identity(2);
  for (int k = 0; k < 3; ++k) rho += pauli(k) * cplx{b.r[k], 0.0};
  rho *= 0.5;
  return rho;
}

StateVector qubit_state(double theta, double phi) {
  return {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)};
}

void require_normalized(std::span<const cplx> psi, double tol) {
  if (psi.empty() || std::abs(norm(psi) - 1.0) > tol)
    throw Error(Errc::NotNormalized, "state vector must have unit norm");
}

double max_mc_overlap(std::span<const cplx> psi) {
  require_normalized(psi);
  double s = 0.0;
  for (const cplx& z : psi) s += std::abs(z);
  return s * s / static_cast<double>(psi.size());
}

}  // namespace qsl

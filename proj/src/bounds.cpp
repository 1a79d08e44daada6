#include "qsl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsl/error.hpp"

namespace qsl {

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

void require_positive_energy(double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw Error(Errc::InvalidArgument, "energy must be positive and finite");
}

void require_dimension(std::size_t d) {
  if (d < 2) throw Error(Errc::BadDimension, "dimension must be >= 2");
}

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

void require_nonzero(const BlochVector& b) {
  if (b.radius() <= 1e-15) throw Error(Errc::ZeroBlochVector, "Bloch vector has zero length");
}

// Unit vector orthogonal to r: the first coordinate axis with r_k = 0, else the
// axis with the smallest |r_k| made orthogonal to r.
Vec3 orthogonal_axis(const Vec3& r) {
  const double len = length(r);
  for (int k = 0; k < 3; ++k) {
    if (std::abs(r[k]) <= 1e-12 * len) {
      Vec3 e{};
      e[k] = 1.0;
      return e;
    }
  }
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(r[i]) < std::abs(r[k])) k = i;
  Vec3 e{};
  e[k] = 1.0;
  const double p = dot(e, r) / (len * len);
  for (int i = 0; i < 3; ++i) e[i] -= p * r[i];
  const double n = length(e);
  if (n <= 1e-12) throw Error(Errc::ParallelVectors, "no orthogonal rotation axis found");
  for (double& x : e) x /= n;
  return e;
}

ComplexMatrix projector(std::span<const cplx> v) { return ComplexMatrix::outer(v, v); }

StateVector normalized_qutrit(double phase1) {
  const double r = 1.0 / std::sqrt(3.0);
  return {r, r * std::polar(1.0, phase1), r};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
  const auto h = hermitian_eig(rho, Tolerances{.hermitian = 1e-9});
  std::vector<cplx> roots(h.dim());
  for (std::size_t j = 0; j < h.dim(); ++j) roots[j] = std::sqrt(std::max(h.eigenvalues()[j], 0.0));
  return spectral_compose(h.eigenvectors(), roots);
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  ComplexMatrix s = m + m.adjoint();
  s *= 0.5;
  return s;
}

}  // namespace

std::string_view to_string(BoundKind k) { return k == BoundKind::Lower ? "lower" : "upper"; }

std::string_view to_string(Tightness t) {
  switch (t) {
    case Tightness::Tight: return "tight";
    case Tightness::NotTight: return "not_tight";
    case Tightness::Unknown: return "unknown";
  }
  return "unknown";
}

BoundReport make_bound(double g, double energy, BoundKind kind, Tightness tight,
                       std::string source, std::string note) {
  require_positive_energy(energy);
  return BoundReport{g / energy, kind, tight, g, std::move(source), std::move(note)};
}

double mean_energy(const HermitianOperator& h) {
  double sum = 0.0;
  for (double e : h.eigenvalues()) sum += e;
  return sum / static_cast<double>(h.dim()) - h.ground_energy();
}

// ---- single qubit ---------------------------------------------------------

BoundReport qubit_transition_bound(const BlochVector& r0, const BlochVector& r1, double energy) {
  require_nonzero(r0);
  require_nonzero(r1);
  const double c = clamp_unit(dot(r0.r, r1.r) / (r0.radius() * r1.radius()));
  return make_bound(std::acos(c) / 2.0, energy, BoundKind::Lower, Tightness::Tight,
                    "single-qubit transition limit");
}

HermitianOperator optimal_qubit_hamiltonian(const BlochVector& r0, const BlochVector& r1,
                                            double energy) {
  require_nonzero(r0);
  require_nonzero(r1);
  require_positive_energy(energy);
  Vec3 n = cross(r0.r, r1.r);
  const double len = length(n);
  if (len <= 1e-12 * r0.radius() * r1.radius()) {
    n = orthogonal_axis(r0.r);
  } else {
    for (double& x : n) x /= len;
  }
  return qubit_axis_hamiltonian(n, energy);
}

BoundReport mixed_qubit_bound(const ComplexMatrix& rho0, const ComplexMatrix& rho1, double energy) {
  if (rho0.dim() != 2 || rho1.dim() != 2) throw Error(Errc::NotQubit, "qubit states required");
  const double overlap = (rho0 * rho1).trace().real();
  const double p0 = 2.0 * (rho0 * rho0).trace().real() - 1.0;
  const double p1 = 2.0 * (rho1 * rho1).trace().real() - 1.0;
  if (p0 <= 1e-24 || p1 <= 1e-24)
    throw Error(Errc::MaximallyMixedInput, "zero Bloch radius");
  const double c = clamp_unit((2.0 * overlap - 1.0) / std::sqrt(p0 * p1));
  return make_bound(std::acos(c) / 2.0, energy, BoundKind::Lower, Tightness::Tight,
                    "single-qubit transition limit (trace form)");
}

// ---- pure states ----------------------------------------------------------

BoundReport pure_state_bound(std::span<const cplx> psi0, std::span<const cplx> psi1,
                             double energy, PureBoundMode mode) {
  if (psi0.size() != psi1.size()) throw Error(Errc::DimMismatch, "states of different dimension");
  require_normalized(psi0);
  require_normalized(psi1);
  const double angle = std::acos(clamp_unit(2.0 * std::norm(inner(psi0, psi1)) - 1.0));
  if (mode == PureBoundMode::MeanEnergy) {
    const double d = static_cast<double>(psi0.size());
    return make_bound(angle / d, energy, BoundKind::Lower, Tightness::Tight,
                      "pure-state limit (mean energy)",
                      "saturated by a rank-one projector Hamiltonian");
  }
  return make_bound(angle, energy, BoundKind::Lower, Tightness::Unknown,
                    "pure-state limit (energy gap)", "energy argument is E_gap");
}

FminResult fmin(const HermitianOperator& h, double t) {
  const double gap = h.gap();
  if (!(t >= 0.0) || (gap > 0.0 && t * gap > kPi * (1.0 + 1e-12)))
    throw Error(Errc::TimeOutOfRange, "need 0 <= t <= pi / E_gap");
  FminResult out;
  out.value = std::abs(std::polar(1.0, -gap * t) + 1.0) / 2.0;
  const auto& v = h.eigenvectors();
  const std::size_t last = h.dim() - 1;
  out.psi_min.resize(h.dim());
  if (last == 0) {
    out.psi_min = v.column(0);
  } else {
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k < h.dim(); ++k) out.psi_min[k] = r * (v(k, 0) + v(k, last));
  }
  return out;
}

// ---- unbiased bases -------------------------------------------------------

double d6_bound_constant() { return std::acos((4.0 - std::sqrt(6.0)) / 2.0) / 3.0; }

BoundReport general_unbiased_bound(std::size_t d, double energy) {
  require_dimension(d);
  const double dd = static_cast<double>(d);
  return make_bound(kPi * (dd - 1.0) / (4.0 * dd), energy, BoundKind::Lower, Tightness::Unknown,
                    "general-d unbiased-basis limit", "strict inequality");
}

BoundReport unbiased_bound(std::size_t d, double energy) {
  require_dimension(d);
  switch (d) {
    case 2:
      return make_bound(kPi / 4.0, energy, BoundKind::Lower, Tightness::Tight,
                        "single-qubit unbiased-basis limit");
    case 3:
      return make_bound(2.0 * kPi / 9.0, energy, BoundKind::Lower, Tightness::Tight,
                        "qutrit unbiased-basis limit",
                        "tight for the plus class, strict for the tilde class");
    case 4:
      return make_bound(kPi / 4.0, energy, BoundKind::Lower, Tightness::Tight,
                        "two-qubit unbiased-basis limit");
    case 6:
      return make_bound(d6_bound_constant(), energy, BoundKind::Lower, Tightness::Unknown,
                        "d=6 boundary analysis");
    default:
      return general_unbiased_bound(d, energy);
  }
}

BoundReport qutrit_tilde_bound(double energy) {
  return make_bound(4.0 * kPi / 9.0, energy, BoundKind::Lower, Tightness::Unknown,
                    "qutrit tilde-class limit",
                    "numerical evidence only, sampled excess epsilon <= 1e-5");
}

NQubitBounds nqubit_upper_bound(std::size_t n, double energy) {
  if (n < 1) throw Error(Errc::BadDimension, "need at least one qubit");
  return NQubitBounds{
      make_bound(kPi / 2.0, energy, BoundKind::Upper, Tightness::Unknown,
                 "n-qubit Hadamard Hamiltonian"),
      make_bound(static_cast<double>(n) * kPi / 4.0, energy, BoundKind::Upper, Tightness::Tight,
                 "non-interacting qubits", "optimal time without interactions")};
}

BoundReport perm_bound(std::size_t d, double energy) {
  require_dimension(d);
  const double dd = static_cast<double>(d);
  return make_bound(kPi * (dd - 1.0) / dd, energy, BoundKind::Lower, Tightness::Tight,
                    "cyclic permutation limit",
                    "either the permutation happens at t = pi(d-1)/(dE) or never");
}

ComplexMatrix cyclic_shift(std::size_t d) {
  ComplexMatrix u(d);
  for (std::size_t n = 0; n < d; ++n) u((n + 1) % d, n) = 1.0;
  return u;
}

ConstraintCheck constraint_check(const HermitianOperator& h, double t) {
  ConstraintCheck out;
  for (double e : h.eigenvalues()) out.value += std::cos(e * t);
  out.satisfied = std::abs(out.value) <= std::sqrt(static_cast<double>(h.dim())) + 1e-9;
  return out;
}

// ---- optimal Hamiltonians -------------------------------------------------

OptimalKind parse_optimal_kind(std::string_view name) {
  if (name == "qutrit_plus") return OptimalKind::QutritPlus;
  if (name == "qutrit_tilde") return OptimalKind::QutritTilde;
  if (name == "two_qubit") return OptimalKind::TwoQubit;
  if (name == "nqubit_hadamard") return OptimalKind::NQubitHadamard;
  throw Error(Errc::BadKind, "unknown Hamiltonian kind '" + std::string(name) + "'");
}

HermitianOperator construct_optimal(OptimalKind kind, std::size_t n) {
  switch (kind) {
    case OptimalKind::QutritPlus:
      return hermitian_eig(projector(normalized_qutrit(-2.0 * kPi / 3.0)));
    case OptimalKind::QutritTilde:
      return hermitian_eig(projector(normalized_qutrit(2.0 * kPi / 3.0)) * cplx{-1.0, 0.0});
    case OptimalKind::TwoQubit:
      return hermitian_eig(kron(pauli(1), pauli(1)) - kron(pauli(0), pauli(2)) -
                           kron(pauli(2), pauli(0)));
    case OptimalKind::NQubitHadamard: {
      if (n < 1) throw Error(Errc::BadDimension, "need at least one qubit");
      ComplexMatrix m = hadamard();
      for (std::size_t i = 1; i < n; ++i) m = kron(m, hadamard());
      return hermitian_eig(m);
    }
  }
  throw Error(Errc::BadKind, "unknown Hamiltonian kind");
}

HermitianOperator construct_optimal_pure(std::span<const cplx> psi0, std::span<const cplx> psi1) {
  if (psi0.size() != psi1.size()) throw Error(Errc::DimMismatch, "states of different dimension");
  require_normalized(psi0);
  require_normalized(psi1);
  const std::size_t d = psi0.size();
  const cplx a = inner(psi0, psi1);
  StateVector e1(d);
  for (std::size_t k = 0; k < d; ++k) e1[k] = psi1[k] - a * psi0[k];
  const double b = norm(e1);
  if (b <= 1e-12) return hermitian_eig(projector(psi0));
  for (auto& z : e1) z /= b;

  // In the (psi0, e1) plane psi0 sits at the north pole and psi1 has Bloch
  // vector (2b Re a, -2b Im a, |a|^2 - b^2); rotate about their cross product.
  const Vec3 r1 = {2.0 * b * a.real(), -2.0 * b * a.imag(), std::norm(a) - b * b};
  Vec3 n = cross({0.0, 0.0, 1.0}, r1);
  const double len = length(n);
  const double azimuth = len <= 1e-12 ? 0.0 : std::atan2(n[1], n[0]);
  const double r = 1.0 / std::sqrt(2.0);
  StateVector phi(d);
  const cplx tilt = std::polar(r, azimuth);
  for (std::size_t k = 0; k < d; ++k) phi[k] = r * psi0[k] + tilt * e1[k];
  return hermitian_eig(projector(phi));
}

OrderedBasis two_qubit_unbiased_target() {
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector plus = {r, r};
  const StateVector minus = {r, -r};
  const auto ket = [](const StateVector& a, const StateVector& b) {
    StateVector out(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out[2 * i + j] = a[i] * b[j];
    return out;
  };
  const std::vector<StateVector> cols = {ket(plus, plus), ket(minus, plus), ket(plus, minus),
                                         ket(minus, minus)};
  return OrderedBasis(ComplexMatrix::from_columns(cols));
}

double plus_return_fidelity(double t) { return (5.0 + 4.0 * std::cos(t)) / 9.0; }

TransformCheck achieves_transform(const HermitianOperator& h, double t, const OrderedBasis& src,
                                  const OrderedBasis& dst, double tol) {
  if (h.dim() != src.dim() || h.dim() != dst.dim())
    throw Error(Errc::DimMismatch, "Hamiltonian and bases must share a dimension");
  const ComplexMatrix overlaps = dst.columns().adjoint() * mat_exp(h, t).matrix() * src.columns();
  TransformCheck out;
  out.recovered_phases.resize(h.dim());
  for (std::size_t j = 0; j < h.dim(); ++j) {
    const cplx ov = overlaps(j, j);
    out.max_column_error = std::max(out.max_column_error, std::abs(1.0 - std::abs(ov)));
    out.recovered_phases[j] = std::arg(ov);
  }
  out.achieved = out.max_column_error <= tol;
  return out;
}

std::vector<SaturationCase> saturation_suite(std::size_t max_qubits) {
  std::vector<SaturationCase> cases;
  const auto add = [&](std::string name, HermitianOperator h, double et, OrderedBasis target) {
    const double t = et / mean_energy(h);
    cases.push_back(SaturationCase{std::move(name), std::move(h), et, t, std::move(target)});
  };
  add("qutrit_plus", construct_optimal(OptimalKind::QutritPlus), 2.0 * kPi / 9.0,
      standard_basis(BasisKind::QutritPlus, 3));
  add("qutrit_tilde", construct_optimal(OptimalKind::QutritTilde), 4.0 * kPi / 9.0,
      standard_basis(BasisKind::QutritTilde, 3));
  add("two_qubit", construct_optimal(OptimalKind::TwoQubit), kPi / 4.0, two_qubit_unbiased_target());
  for (std::size_t n = 1; n <= max_qubits; ++n)
    add("hadamard_n" + std::to_string(n), construct_optimal(OptimalKind::NQubitHadamard, n),
        kPi / 2.0, standard_basis(BasisKind::HadamardN, n));
  return cases;
}

HermitianOperator conjugate_hamiltonian(const HermitianOperator& h, std::span<const double> phases) {
  if (phases.size() != h.dim()) throw Error(Errc::DimMismatch, "one phase per basis state");
  std::vector<cplx> diag(phases.size());
  for (std::size_t j = 0; j < phases.size(); ++j) diag[j] = std::polar(1.0, phases[j]);
  const auto v = ComplexMatrix::diagonal(diag);
  return hermitian_eig(symmetrized(v * h.matrix() * v.adjoint()));
}

HermitianOperator conjugate_hamiltonian(const HermitianOperator& h, const ComplexMatrix& v) {
  if (v.dim() != h.dim()) throw Error(Errc::DimMismatch, "V and H must share a dimension");
  std::vector<double> phases(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    for (std::size_t j = 0; j < v.dim(); ++j)
      if (i != j && std::abs(v(i, j)) > 1e-12)
        throw Error(Errc::NotDiagonalUnitary, "V has off-diagonal entries");
    if (std::abs(std::abs(v(i, i)) - 1.0) > 1e-10)
      throw Error(Errc::NotDiagonalUnitary, "diagonal entries must have unit modulus");
    phases[i] = std::arg(v(i, i));
  }
  return conjugate_hamiltonian(h, phases);
}

// ---- coherence ------------------------------------------------------------

namespace {

struct QubitGeometry {
  double radius;
  double elevation;  // arcsin(|r_z| / |r|)
  BlochVector bloch;
};

QubitGeometry geometry(const ComplexMatrix& rho) {
  const BlochVector b = bloch_from_state(rho);
  const double radius = b.radius();
  if (radius <= 1e-15) throw Error(Errc::ZeroBlochVector, "maximally mixed input");
  return {radius, std::asin(std::min(1.0, std::abs(b.r[2]) / radius)), b};
}

}  // namespace

double coherence_max_qubit(const ComplexMatrix& rho, double energy, double t) {
  require_positive_energy(energy);
  if (!(t >= 0.0)) throw Error(Errc::TimeOutOfRange, "t must be non-negative");
  const auto g = geometry(rho);
  if (2.0 * energy * t >= g.elevation) return g.radius;
  return g.radius * std::cos(g.elevation - 2.0 * energy * t);
}

double t_mc(const ComplexMatrix& rho, double energy) {
  require_positive_energy(energy);
  return geometry(rho).elevation / (2.0 * energy);
}

std::array<double, 3> optimal_coherence_axis(const ComplexMatrix& rho) {
  const auto g = geometry(rho);
  const Vec3 r = g.bloch.r;
  Vec3 n = cross({0.0, 0.0, 1.0}, r);
  const double len = length(n);
  if (len <= 1e-12 * g.radius) return {1.0, 0.0, 0.0};
  const double sign = r[2] >= 0.0 ? 1.0 : -1.0;
  for (double& x : n) x *= sign / len;
  return n;
}

HermitianOperator qubit_axis_hamiltonian(const std::array<double, 3>& axis, double energy) {
  require_positive_energy(energy);
  ComplexMatrix h = ComplexMatrix::identity(2) * cplx{energy, 0.0};
  for (int k = 0; k < 3; ++k) h += pauli(k) * cplx{energy * axis[k], 0.0};
  return hermitian_eig(h);
}

BoundReport mc_speed_limit(std::span<const cplx> psi, double energy) {
  const double overlap = max_mc_overlap(psi);
  const double d = static_cast<double>(psi.size());
  return make_bound(std::acos(clamp_unit(2.0 * overlap - 1.0)) / d, energy, BoundKind::Lower,
                    Tightness::Unknown, "maximally-coherent-state limit",
                    "minimised over all target phases");
}

double reference_mixed_bound(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                             const HermitianOperator& h) {
  if (rho.dim() != sigma.dim() || rho.dim() != h.dim())
    throw Error(Errc::DimMismatch, "states and Hamiltonian must share a dimension");
  if (!is_density_matrix(rho) || !is_density_matrix(sigma))
    throw Error(Errc::NotDensityMatrix, "fidelity needs density matrices");

  const ComplexMatrix root = psd_sqrt(rho);
  const auto inner_op = hermitian_eig(symmetrized(root * sigma * root), Tolerances{.hermitian = 1e-9});
  double fidelity = 0.0;
  for (double mu : inner_op.eigenvalues()) fidelity += std::sqrt(std::max(mu, 0.0));

  const ComplexMatrix& hm = h.matrix();
  const double mean = (rho * hm).trace().real();
  const double second = (rho * hm * hm).trace().real();
  const double spread = std::sqrt(std::max(0.0, second - mean * mean));
  const double above_ground = mean - h.ground_energy();
  const double denom = std::min(spread, above_ground);
  if (denom <= 1e-15) throw Error(Errc::ZeroDenominator, "min(Delta E, E) vanishes");
  return std::acos(clamp_unit(fidelity)) / denom;
}

}  // namespace qsl

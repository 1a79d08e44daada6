#include "qsl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qsl/error.hpp"

namespace qsl {

namespace {

constexpr int kMaxSweeps = 100;
// Mixing weight for the commuting Hermitian parts of a unitary.
constexpr double kMixWeight = 0.5772156649015329;

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw Error(Errc::DimMismatch, std::to_string(a) + " vs " + std::to_string(b));
}

void normalize_phase(ComplexMatrix& vecs, std::size_t j) {
  const std::size_t d = vecs.dim();
  double best = 0.0;
  for (std::size_t k = 0; k < d; ++k) best = std::max(best, std::abs(vecs(k, j)));
  if (best == 0.0) return;
  std::size_t pivot = 0;
  for (std::size_t k = 0; k < d; ++k) {
    if (std::abs(vecs(k, j)) >= best * (1.0 - 1e-9)) {
      pivot = k;
      break;
    }
  }
  const cplx phase = std::conj(vecs(pivot, j)) / std::abs(vecs(pivot, j));
  for (std::size_t k = 0; k < d; ++k) vecs(k, j) *= phase;
}

// Modified Gram-Schmidt on columns [first, last) in index order.
void orthonormalize_columns(ComplexMatrix& vecs, std::size_t first, std::size_t last) {
  const std::size_t d = vecs.dim();
  for (std::size_t j = first; j < last; ++j) {
    for (std::size_t i = first; i < j; ++i) {
      cplx proj = 0.0;
      for (std::size_t k = 0; k < d; ++k) proj += std::conj(vecs(k, i)) * vecs(k, j);
      for (std::size_t k = 0; k < d; ++k) vecs(k, j) -= proj * vecs(k, i);
    }
    double nrm = 0.0;
    for (std::size_t k = 0; k < d; ++k) nrm += std::norm(vecs(k, j));
    nrm = std::sqrt(nrm);
    for (std::size_t k = 0; k < d; ++k) vecs(k, j) /= nrm;
  }
}

ComplexMatrix permute_columns(const ComplexMatrix& m, std::span<const std::size_t> order) {
  ComplexMatrix out(m.dim());
  for (std::size_t j = 0; j < order.size(); ++j)
    for (std::size_t k = 0; k < m.dim(); ++k) out(k, j) = m(k, order[j]);
  return out;
}

// Snap phases that sit on the -pi edge to +pi so degenerate -1 eigenvalues stay together.
double snapped_phase(double angle, double group_tol) {
  double a = principal_angle(angle);
  if (a < -kPi + group_tol) a = kPi;
  return a;
}

struct JacobiResult {
  std::vector<double> values;
  ComplexMatrix vectors;
};

JacobiResult jacobi(ComplexMatrix a) {
  const std::size_t d = a.dim();
  // Row j of vt is eigenvector j, so every rotation touches contiguous memory.
  ComplexMatrix vt = ComplexMatrix::identity(d);

  double scale = 0.0;
  for (const cplx& z : a.entries()) scale += std::norm(z);
  scale = std::sqrt(scale);
  const double target = 1e-15 * std::max(scale, 1e-300);

  int sweep = 0;
  for (;; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= target) break;
    if (sweep >= kMaxSweeps) throw Error(Errc::NoConvergence, "Jacobi sweeps exhausted");

    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const cplx g = a(p, q);
        const double ag = std::abs(g);
        if (ag <= 1e-300) continue;
        const cplx e = g / ag;
        const cplx ebar = std::conj(e);
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * ag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx se = s * e, ce = c * e;

        // A <- J^dagger A J with J = [[c, s], [-s conj(e), c conj(e)]] on (p, q);
        // rows are updated directly and columns mirrored by hermiticity.
        cplx* rp = &a(p, 0);
        cplx* rq = &a(q, 0);
        for (std::size_t k = 0; k < d; ++k) {
          if (k == p || k == q) continue;
          const cplx apk = rp[k], aqk = rq[k];
          rp[k] = c * apk - se * aqk;
          rq[k] = s * apk + ce * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          if (k == p || k == q) continue;
          a(k, p) = std::conj(rp[k]);
          a(k, q) = std::conj(rq[k]);
        }
        const cplx j00 = c, j01 = s, j10 = -s * ebar, j11 = c * ebar;
        const cplx b00 = app * j00 + g * j10, b01 = app * j01 + g * j11;
        const cplx b10 = std::conj(g) * j00 + aqq * j10, b11 = std::conj(g) * j01 + aqq * j11;
        a(p, p) = (std::conj(j00) * b00 + std::conj(j10) * b10).real();
        a(q, q) = (std::conj(j01) * b01 + std::conj(j11) * b11).real();
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        cplx* vp = &vt(p, 0);
        cplx* vq = &vt(q, 0);
        for (std::size_t k = 0; k < d; ++k) {
          const cplx vkp = vp[k], vkq = vq[k];
          vp[k] = c * vkp - s * ebar * vkq;
          vq[k] = s * vkp + c * ebar * vkq;
        }
      }
    }
  }

  std::vector<double> vals(d);
  for (std::size_t j = 0; j < d; ++j) vals[j] = a(j, j).real();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });

  JacobiResult out;
  out.values.resize(d);
  for (std::size_t j = 0; j < d; ++j) out.values[j] = vals[order[j]];
  ComplexMatrix v(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) v(i, j) = vt(j, i);
  out.vectors = permute_columns(v, order);
  for (std::size_t j = 0; j < d; ++j) normalize_phase(out.vectors, j);
  return out;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix h = m + m.adjoint();
  h *= 0.5;
  return h;
}

}  // namespace

// ---- ComplexMatrix -------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {
  if (dim == 0) throw Error(Errc::InvalidArgument, "matrix dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), a_(std::move(entries)) {
  if (dim == 0) throw Error(Errc::InvalidArgument, "matrix dimension must be >= 1");
  if (a_.size() != dim * dim)
    throw Error(Errc::InvalidArgument, "expected " + std::to_string(dim * dim) + " entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const StateVector> columns) {
  ComplexMatrix m(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> ket, std::span<const cplx> bra) {
  require_same_dim(ket.size(), bra.size());
  ComplexMatrix m(ket.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
  return m;
}

StateVector ComplexMatrix::column(std::size_t j) const {
  StateVector v(dim_);
  for (std::size_t k = 0; k < dim_; ++k) v[k] = (*this)(k, j);
  return v;
}

void ComplexMatrix::set_column(std::size_t j, std::span<const cplx> v) {
  require_same_dim(dim_, v.size());
  for (std::size_t k = 0; k < dim_; ++k) (*this)(k, j) = v[k];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : a_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::max_diff(const ComplexMatrix& other) const {
  require_same_dim(dim_, other.dim_);
  double m = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - other.a_[i]));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(dim_, rhs.dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(dim_, rhs.dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& z : a_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs.dim_, rhs.dim_);
  const std::size_t d = lhs.dim_;
  ComplexMatrix out(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const cplx lik = lhs(i, k);
      if (lik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < d; ++j) out(i, j) += lik * rhs(k, j);
    }
  }
  return out;
}

StateVector operator*(const ComplexMatrix& m, std::span<const cplx> v) {
  require_same_dim(m.dim_, v.size());
  StateVector out(m.dim_);
  for (std::size_t i = 0; i < m.dim_; ++i) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < m.dim_; ++k) acc += m(i, k) * v[k];
    out[i] = acc;
  }
  return out;
}

// ---- free functions -----------------------------------------------------

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  require_same_dim(a.size(), b.size());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

ComplexMatrix pauli(int axis) {
  const cplx i{0.0, 1.0};
  switch (axis) {
    case 0: return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
    case 1: return ComplexMatrix(2, {0.0, -i, i, 0.0});
    case 2: return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
    default: throw Error(Errc::InvalidArgument, "pauli axis must be 0, 1 or 2");
  }
}

ComplexMatrix hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return ComplexMatrix(2, {r, r, r, -r});
}

double principal_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  const double scale = m.max_abs();
  const std::size_t d = m.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > rel_tol * scale) return false;
  return true;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  return (m * m.adjoint()).max_diff(ComplexMatrix::identity(m.dim())) <= tol;
}

ComplexMatrix spectral_compose(const ComplexMatrix& vecs, std::span<const cplx> values) {
  const std::size_t d = vecs.dim();
  require_same_dim(d, values.size());
  ComplexMatrix out(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += vecs(i, k) * values[k] * std::conj(vecs(j, k));
      out(i, j) = acc;
    }
  }
  return out;
}

HermitianOperator hermitian_eig(const ComplexMatrix& m, const Tolerances& tol) {
  if (!is_hermitian(m, tol.hermitian))
    throw Error(Errc::NotHermitian, "symmetry defect exceeds tolerance");
  ComplexMatrix sym = hermitian_part(m);
  JacobiResult r = jacobi(sym);
  return HermitianOperator(std::move(sym), std::move(r.values), std::move(r.vectors));
}

UnitaryOperator mat_exp(const HermitianOperator& h, double t) {
  const std::size_t d = h.dim();
  const auto energies = h.eigenvalues();
  std::vector<cplx> lambda(d);
  std::vector<double> phase(d);
  for (std::size_t j = 0; j < d; ++j) {
    lambda[j] = std::polar(1.0, -energies[j] * t);
    phase[j] = snapped_phase(energies[j] * t, Tolerances{}.phase_group);
  }
  ComplexMatrix u = spectral_compose(h.eigenvectors(), lambda);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return phase[x] < phase[y]; });
  std::vector<double> sorted(d);
  for (std::size_t j = 0; j < d; ++j) sorted[j] = phase[order[j]];
  return UnitaryOperator(std::move(u), std::move(sorted),
                         permute_columns(h.eigenvectors(), order));
}

UnitaryOperator unitary_eigphases(const ComplexMatrix& u, const Tolerances& tol) {
  if (!is_unitary(u, tol.equality)) throw Error(Errc::NotUnitary, "U U^dagger != 1");
  const std::size_t d = u.dim();

  // U = A + iB with commuting Hermitian A, B; diagonalize A + cB, then split
  // clusters of that combination by A alone.
  const ComplexMatrix a = hermitian_part(u);
  ComplexMatrix b = u - u.adjoint();
  b *= cplx{0.0, -0.5};
  ComplexMatrix mix = a + b * kMixWeight;
  JacobiResult r = jacobi(hermitian_part(mix));
  ComplexMatrix w = std::move(r.vectors);

  std::size_t start = 0;
  while (start < d) {
    std::size_t end = start + 1;
    while (end < d && r.values[end] - r.values[end - 1] <= 1e-8) ++end;
    const std::size_t m = end - start;
    if (m > 1) {
      std::vector<cplx> aw(d * m);  // A W_cluster, row-major d x m
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j < m; ++j) {
          cplx acc = 0.0;
          for (std::size_t l = 0; l < d; ++l) acc += a(k, l) * w(l, start + j);
          aw[k * m + j] = acc;
        }
      ComplexMatrix sub(m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          cplx acc = 0.0;
          for (std::size_t k = 0; k < d; ++k) acc += std::conj(w(k, start + i)) * aw[k * m + j];
          sub(i, j) = acc;
        }
      JacobiResult inner_eig = jacobi(hermitian_part(sub));
      ComplexMatrix block(d);
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
          cplx acc = 0.0;
          for (std::size_t i = 0; i < m; ++i) acc += w(k, start + i) * inner_eig.vectors(i, j);
          block(k, j) = acc;
        }
      }
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j < m; ++j) w(k, start + j) = block(k, j);
    }
    start = end;
  }

  std::vector<cplx> lambda(d);
  std::vector<double> phase(d);
  for (std::size_t j = 0; j < d; ++j) {
    const StateVector col = w.column(j);
    lambda[j] = inner(col, u * std::span<const cplx>(col));
    phase[j] = snapped_phase(-std::arg(lambda[j]), tol.phase_group);
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (phase[x] != phase[y]) return phase[x] < phase[y];
    return lambda[x].imag() < lambda[y].imag();
  });
  std::vector<double> sorted(d);
  for (std::size_t j = 0; j < d; ++j) sorted[j] = phase[order[j]];
  ComplexMatrix vecs = permute_columns(w, order);

  start = 0;
  while (start < d) {
    std::size_t end = start + 1;
    while (end < d && sorted[end] - sorted[end - 1] < tol.phase_group) ++end;
    if (end - start > 1) orthonormalize_columns(vecs, start, end);
    start = end;
  }
  for (std::size_t j = 0; j < d; ++j) normalize_phase(vecs, j);
  return UnitaryOperator(u, std::move(sorted), std::move(vecs));
}

ComplexMatrix unitary_root(const UnitaryOperator& u, int k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "root order must be >= 1");
  if (k == 1) return u.matrix();
  const auto phases = u.eigenphases();
  std::vector<cplx> root(phases.size());
  for (std::size_t j = 0; j < phases.size(); ++j) root[j] = std::polar(1.0, -phases[j] / k);
  return spectral_compose(u.eigenvectors(), root);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  if (da * db > kMaxDim)
    throw Error(Errc::DimensionOverflow, std::to_string(da * db) + " exceeds " +
                                             std::to_string(kMaxDim));
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace qsl

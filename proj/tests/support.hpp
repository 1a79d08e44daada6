#pragma once

// Random generators for property tests. Independent of the library's own
// constructions: unitaries come from Gram-Schmidt on Gaussian columns.

#include <cmath>
#include <random>

#include "qsl/linalg.hpp"

namespace qsl::testing {

inline StateVector random_state(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  StateVector v(d);
  for (auto& z : v) z = {g(rng), g(rng)};
  const double n = norm(v);
  for (auto& z : v) z /= n;
  return v;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
  std::normal_distribution<double> g;
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = scale * g(rng);
    for (std::size_t j = i + 1; j < d; ++j) {
      m(i, j) = scale * cplx{g(rng), g(rng)};
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  std::vector<StateVector> cols;
  while (cols.size() < d) {
    StateVector v(d);
    for (auto& z : v) z = {g(rng), g(rng)};
    for (const auto& c : cols) {
      const cplx p = inner(c, v);
      for (std::size_t k = 0; k < d; ++k) v[k] -= p * c[k];
    }
    const double n = norm(v);
    if (n < 1e-8) continue;
    for (auto& z : v) z /= n;
    cols.push_back(std::move(v));
  }
  return ComplexMatrix::from_columns(cols);
}

inline ComplexMatrix pure_density(std::span<const cplx> psi) {
  return ComplexMatrix::outer(psi, psi);
}

}  // namespace qsl::testing

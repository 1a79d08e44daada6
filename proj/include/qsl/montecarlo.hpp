#pragma once

// Random-phase unitaries U = sum_n e^{i phi_n} |b_n><n| onto a fixed basis,
// and the smallest E t with which a Hamiltonian can generate each of them.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qsl/linalg.hpp"
#include "qsl/states.hpp"

namespace qsl {

struct BranchChoice {
  double et = 0.0;
  // false: E_j t = alpha_j, true: E_j t = alpha_j + 2 pi.
  std::vector<bool> branch_bits;
};

// Minimises mean - min of {alpha_j + 2 pi b_j} over all 2^d branch choices.
// Ties within 1e-12 go to the fewest true bits, then lexicographic order.
// Throws DimTooLarge for d > 20.
BranchChoice et_from_eigenphases(std::span<const double> eigenphases);
BranchChoice et_from_unitary(const UnitaryOperator& u);

struct SampleRecord {
  std::vector<double> phases;       // phi_n in [0, 2 pi)
  std::vector<double> eigenphases;  // principal, ascending
  std::vector<bool> branch_bits;
  double et = 0.0;
};

struct EtHistogram {
  std::vector<double> bin_edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_samples = 0;
  double min_et = 0.0;
  double max_et = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultBins = 200;
inline constexpr std::uint64_t kDefaultSamples = 100000;

// Counter-mode SplitMix64: uniform in [0, 1) as a pure function of (seed, counter).
double uniform_at(std::uint64_t seed, std::uint64_t counter);

// U = basis diag(e^{i phases}).
ComplexMatrix phase_unitary(const OrderedBasis& basis, std::span<const double> phases);

SampleRecord record_from_phases(const OrderedBasis& basis, std::span<const double> phases);

// Sample index i draws phi_k = 2 pi uniform_at(seed, 8 i + k).
SampleRecord sample_record(const OrderedBasis& basis, std::uint64_t seed, std::uint64_t index);

// Histogram over [0, 2 pi]; workers = 0 uses every hardware thread. The result
// does not depend on the worker count.
EtHistogram sample_basis(const OrderedBasis& basis, std::uint64_t n_samples, std::uint64_t seed,
                         std::size_t bins = kDefaultBins, std::size_t workers = 0);
EtHistogram sample_tilde(std::uint64_t n_samples, std::uint64_t seed,
                         std::size_t bins = kDefaultBins, std::size_t workers = 0);
EtHistogram sample_plus(std::uint64_t n_samples, std::uint64_t seed,
                        std::size_t bins = kDefaultBins, std::size_t workers = 0);

// bin_left,bin_right,count rows followed by # n_samples, # seed and # min_et.
void write_histogram_csv(std::ostream& out, const EtHistogram& h);

}  // namespace qsl

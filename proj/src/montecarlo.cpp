#include "qsl/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "qsl/error.hpp"

namespace qsl {

namespace {

constexpr std::size_t kMaxBranchDim = 20;
constexpr double kTieTol = 1e-12;
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Bit j of the mask is b_j; lexicographic order compares b_0 first.
bool lex_less(std::uint32_t a, std::uint32_t b, std::size_t d) {
  for (std::size_t j = 0; j < d; ++j) {
    const bool x = (a >> j) & 1U, y = (b >> j) & 1U;
    if (x != y) return !x;
  }
  return false;
}

}  // namespace

BranchChoice et_from_eigenphases(std::span<const double> alpha) {
  const std::size_t d = alpha.size();
  if (d > kMaxBranchDim) throw Error(Errc::DimTooLarge, "branch enumeration limited to d <= 20");
  if (d == 0) return {};

  const auto et_of = [&](std::uint32_t mask) {
    double sum = 0.0, low = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) {
      const double e = alpha[j] + (((mask >> j) & 1U) ? 2.0 * kPi : 0.0);
      sum += e;
      low = std::min(low, e);
    }
    return sum / static_cast<double>(d) - low;
  };

  std::uint32_t best = 0;
  double best_et = et_of(0);
  const std::uint32_t n_masks = 1U << d;
  for (std::uint32_t mask = 1; mask < n_masks; ++mask) {
    const double et = et_of(mask);
    if (et < best_et - kTieTol) {
      best = mask;
      best_et = et;
    } else if (et <= best_et + kTieTol) {
      const int pm = std::popcount(mask), pb = std::popcount(best);
      if (pm < pb || (pm == pb && lex_less(mask, best, d))) {
        best = mask;
        best_et = std::min(best_et, et);
      }
    }
  }
  BranchChoice out;
  out.et = et_of(best);
  out.branch_bits.resize(d);
  for (std::size_t j = 0; j < d; ++j) out.branch_bits[j] = (best >> j) & 1U;
  return out;
}

BranchChoice et_from_unitary(const UnitaryOperator& u) { return et_from_eigenphases(u.eigenphases()); }

double uniform_at(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(splitmix(seed + (counter + 1) * kGamma) >> 11) * 0x1.0p-53;
}

ComplexMatrix phase_unitary(const OrderedBasis& basis, std::span<const double> phases) {
  if (phases.size() != basis.dim()) throw Error(Errc::DimMismatch, "one phase per basis element");
  ComplexMatrix u = basis.columns();
  for (std::size_t j = 0; j < u.dim(); ++j) {
    const cplx p = std::polar(1.0, phases[j]);
    for (std::size_t i = 0; i < u.dim(); ++i) u(i, j) *= p;
  }
  return u;
}

SampleRecord record_from_phases(const OrderedBasis& basis, std::span<const double> phases) {
  const auto u = unitary_eigphases(phase_unitary(basis, phases));
  auto choice = et_from_unitary(u);
  SampleRecord r;
  r.phases.assign(phases.begin(), phases.end());
  r.eigenphases.assign(u.eigenphases().begin(), u.eigenphases().end());
  r.branch_bits = std::move(choice.branch_bits);
  r.et = choice.et;
  return r;
}

SampleRecord sample_record(const OrderedBasis& basis, std::uint64_t seed, std::uint64_t index) {
  if (basis.dim() > 8) throw Error(Errc::DimTooLarge, "sampling supports d <= 8");
  std::vector<double> phases(basis.dim());
  for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = 2.0 * kPi * uniform_at(seed, 8 * index + k);
  return record_from_phases(basis, phases);
}

EtHistogram sample_basis(const OrderedBasis& basis, std::uint64_t n_samples, std::uint64_t seed,
                         std::size_t bins, std::size_t workers) {
  if (n_samples < 1) throw Error(Errc::InvalidArgument, "need at least one sample");
  if (bins < 1) throw Error(Errc::InvalidArgument, "need at least one bin");
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min<std::uint64_t>(workers, n_samples);

  EtHistogram h;
  h.n_samples = n_samples;
  h.seed = seed;
  h.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.bin_edges[b] = 2.0 * kPi * static_cast<double>(b) / bins;
  const double width = 2.0 * kPi / static_cast<double>(bins);

  struct Partial {
    std::vector<std::uint64_t> counts;
    double min_et = std::numeric_limits<double>::infinity();
    double max_et = -std::numeric_limits<double>::infinity();
  };
  std::vector<Partial> partials(workers);
  for (auto& p : partials) p.counts.assign(bins, 0);

  const auto run = [&](std::size_t w) {
    Partial& p = partials[w];
    const std::uint64_t begin = n_samples * w / workers, end = n_samples * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double et = sample_record(basis, seed, i).et;
      p.min_et = std::min(p.min_et, et);
      p.max_et = std::max(p.max_et, et);
      const auto b = static_cast<std::size_t>(std::max(0.0, et / width));
      ++p.counts[std::min(b, bins - 1)];
    }
  };
  std::vector<std::jthread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(run, w);
  run(0);
  threads.clear();

  h.counts.assign(bins, 0);
  h.min_et = std::numeric_limits<double>::infinity();
  h.max_et = -std::numeric_limits<double>::infinity();
  for (const auto& p : partials) {
    for (std::size_t b = 0; b < bins; ++b) h.counts[b] += p.counts[b];
    h.min_et = std::min(h.min_et, p.min_et);
    h.max_et = std::max(h.max_et, p.max_et);
  }
  return h;
}

EtHistogram sample_tilde(std::uint64_t n_samples, std::uint64_t seed, std::size_t bins,
                         std::size_t workers) {
  return sample_basis(standard_basis(BasisKind::QutritTilde, 3), n_samples, seed, bins, workers);
}

EtHistogram sample_plus(std::uint64_t n_samples, std::uint64_t seed, std::size_t bins,
                        std::size_t workers) {
  return sample_basis(standard_basis(BasisKind::QutritPlus, 3), n_samples, seed, bins, workers);
}

void write_histogram_csv(std::ostream& out, const EtHistogram& h) {
  out << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    out << fmt::format("{:.17g},{:.17g},{}\n", h.bin_edges[b], h.bin_edges[b + 1], h.counts[b]);
  out << fmt::format("# n_samples={}\n# seed={}\n# min_et={:.17g}\n", h.n_samples, h.seed, h.min_et);
}

}  // namespace qsl

#include "qsl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <gsl/gsl_multimin.h>
#include "json.hpp"

#include "qsl/error.hpp"
#include "qsl/montecarlo.hpp"

namespace qsl {

namespace {

constexpr std::size_t kMaxOracleDim = 7;
constexpr double kFinalStep = 1e-8;

struct GridBest {
  double value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> index;
};

// Walks every (k_1..k_m) with k_j >= 0 and sum k_j <= budget, k_1 fixed by the caller.
class SimplexWalker {
 public:
  SimplexWalker(const std::vector<double>& cos_table, std::size_t free_vars, std::size_t budget)
      : cos_(cos_table), m_(free_vars), budget_(budget), k_(free_vars) {}

  GridBest run(std::size_t k1) {
    best_ = GridBest{};
    k_[0] = k1;
    visit(1, k1, 1.0 + cos_[k1]);
    return best_;
  }

 private:
  void visit(std::size_t axis, std::size_t used, double partial) {
    if (axis == m_) {
      if (partial < best_.value) {
        best_.value = partial;
        best_.index = k_;
      }
      return;
    }
    for (std::size_t k = 0; used + k <= budget_; ++k) {
      k_[axis] = k;
      visit(axis + 1, used + k, partial + cos_[k]);
    }
  }

  const std::vector<double>& cos_;
  std::size_t m_;
  std::size_t budget_;
  std::vector<std::size_t> k_;
  GridBest best_;
};

// Euclidean projection onto {x >= 0, sum x <= cap}.
void project_capped_simplex(std::vector<double>& x, double cap) {
  for (double& v : x) v = std::max(v, 0.0);
  double sum = 0.0;
  for (double v : x) sum += v;
  if (sum <= cap) return;
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0, tau = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    running += sorted[i];
    const double t = (running - cap) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) tau = t;
  }
  for (double& v : x) v = std::max(v - tau, 0.0);
}

double free_cos_sum(const std::vector<double>& free) {
  double s = 1.0;
  for (double a : free) s += std::cos(a);
  return s;
}

void check_region(const RegionSpec& region, std::size_t grid) {
  if (region.d < 2) throw Error(Errc::BadDimension, "region needs d >= 2");
  if (region.d > kMaxOracleDim) throw Error(Errc::DimTooLarge, "grid oracle limited to d <= 7");
  if (grid < 8) throw Error(Errc::InvalidArgument, "need at least 8 grid points per axis");
  if (!(region.sum_cap >= 0.0) || !std::isfinite(region.sum_cap))
    throw Error(Errc::InvalidArgument, "sum_cap must be finite and non-negative");
}

double et_of_phases(const OrderedBasis& dst, std::span<const double> phases) {
  return et_from_unitary(unitary_eigphases(phase_unitary(dst, phases))).et;
}

struct NmContext {
  const OrderedBasis* dst;
  std::size_t d;
};

double nm_objective(const gsl_vector* v, void* params) {
  const auto* ctx = static_cast<const NmContext*>(params);
  std::vector<double> phases(ctx->d, 0.0);
  for (std::size_t k = 1; k < ctx->d; ++k) phases[k] = gsl_vector_get(v, k - 1);
  return et_of_phases(*ctx->dst, phases);
}

}  // namespace

double cos_sum(std::span<const double> alpha) {
  double s = 0.0;
  for (double a : alpha) s += std::cos(a);
  return s;
}

MinimizationResult minimize_cos_sum(const RegionSpec& region, std::size_t grid) {
  check_region(region, grid);
  const std::size_t m = region.d - 1;
  const std::size_t budget = grid - 1;
  const double h = region.sum_cap / static_cast<double>(budget);

  std::vector<double> cos_table(grid);
  for (std::size_t k = 0; k < grid; ++k) cos_table[k] = std::cos(h * static_cast<double>(k));

  std::vector<GridBest> per_k1(grid);
  const std::size_t workers =
      std::min<std::size_t>(grid, std::max(1U, std::thread::hardware_concurrency()));
  const auto run = [&](std::size_t w) {
    SimplexWalker walker(cos_table, m, budget);
    for (std::size_t k1 = w; k1 < grid; k1 += workers) per_k1[k1] = walker.run(k1);
  };
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(run, w);
    run(0);
  }
  GridBest best;
  for (const auto& b : per_k1)
    if (b.value < best.value) best = b;

  std::vector<double> x(m);
  for (std::size_t j = 0; j < m; ++j) x[j] = h * static_cast<double>(best.index[j]);
  double value = free_cos_sum(x);

  MinimizationResult out;
  out.grid_min = best.value;
  out.grid_resolution = h;

  for (double step = std::max(h, kFinalStep); step >= kFinalStep; step /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t j = 0; j < m; ++j) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> y = x;
          y[j] += sign * step;
          project_capped_simplex(y, region.sum_cap);
          const double v = free_cos_sum(y);
          if (v < value - 1e-15) {
            x = std::move(y);
            value = v;
            improved = true;
            out.refined = true;
          }
        }
      }
    }
  }

  out.min_value = value;
  out.argmin.assign(1, 0.0);
  out.argmin.insert(out.argmin.end(), x.begin(), x.end());
  return out;
}

double theorem4_sum_cap(std::size_t d) { return static_cast<double>(d - 1) * kPi / 4.0; }

double d6_sum_cap() { return 2.0 * std::acos((4.0 - std::sqrt(6.0)) / 2.0); }

bool verify_theorem4(std::size_t d, std::size_t grid) {
  const auto r = minimize_cos_sum(RegionSpec{d, theorem4_sum_cap(d)}, grid);
  return r.min_value > std::sqrt(static_cast<double>(d)) - 1e-6;
}

bool verify_d6_refinement(double cap_factor, std::size_t grid) {
  const auto r = minimize_cos_sum(RegionSpec{6, cap_factor * d6_sum_cap()}, grid);
  return r.min_value > std::sqrt(6.0) - 1e-6;
}

EtSearchResult search_min_et(const OrderedBasis& dst, std::size_t phase_grid) {
  const std::size_t d = dst.dim();
  if (d < 3) throw Error(Errc::BadDimension, "transform search needs d = 3 or 4");
  if (d > 4) throw Error(Errc::DimTooLarge, "transform search needs d = 3 or 4");
  if (phase_grid < 1 || phase_grid > 64) throw Error(Errc::InvalidArgument, "phase_grid must be in [1, 64]");

  const double step = 2.0 * kPi / static_cast<double>(phase_grid);
  std::size_t total = 1;
  for (std::size_t k = 1; k < d; ++k) total *= phase_grid;

  EtSearchResult out;
  out.grid_min = std::numeric_limits<double>::infinity();
  std::vector<double> phases(d, 0.0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = 1; k < d; ++k) {
      phases[k] = step * static_cast<double>(rest % phase_grid);
      rest /= phase_grid;
    }
    const double et = et_of_phases(dst, phases);
    if (et < out.grid_min) {
      out.grid_min = et;
      out.phases = phases;
    }
  }
  out.min_et = out.grid_min;

  NmContext ctx{&dst, d};
  gsl_multimin_function f{&nm_objective, d - 1, &ctx};
  gsl_vector* x = gsl_vector_alloc(d - 1);
  gsl_vector* ss = gsl_vector_alloc(d - 1);
  for (std::size_t k = 1; k < d; ++k) gsl_vector_set(x, k - 1, out.phases[k]);
  gsl_vector_set_all(ss, step / 2);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, d - 1);
  gsl_multimin_fminimizer_set(s, &f, x, ss);
  for (int iter = 0; iter < 5000; ++iter) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
  }
  if (s->fval < out.min_et) {
    out.min_et = s->fval;
    for (std::size_t k = 1; k < d; ++k) out.phases[k] = gsl_vector_get(s->x, k - 1);
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return out;
}

double min_et_for_transform(const OrderedBasis& dst, std::size_t phase_grid) {
  return search_min_et(dst, phase_grid).min_et;
}

std::string minimization_json(const RegionSpec& region, const MinimizationResult& result,
                              std::size_t grid_points_per_axis) {
  nlohmann::json j = {{"d", region.d},
                      {"sum_cap", region.sum_cap},
                      {"min_value", result.min_value},
                      {"argmin", result.argmin},
                      {"grid", grid_points_per_axis},
                      {"refined", result.refined}};
  return j.dump();
}

}  // namespace qsl

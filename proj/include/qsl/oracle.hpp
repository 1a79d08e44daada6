#pragma once

// Brute-force checks for the closed-form bounds: grid minimisation of
// f(alpha) = sum_j cos(alpha_j) over a capped simplex, and a direct search for
// the smallest E t reaching a target basis.

#include <string>
#include <vector>

#include "qsl/states.hpp"

namespace qsl {

// alpha_0 = 0, alpha_j >= 0 and sum_j alpha_j <= sum_cap.
struct RegionSpec {
  std::size_t d = 2;
  double sum_cap = 0.0;
};

struct MinimizationResult {
  double min_value = 0.0;
  std::vector<double> argmin;  // d angles, argmin[0] = 0
  double grid_resolution = 0.0;
  bool refined = false;
  double grid_min = 0.0;  // best value on the coarse grid
};

inline constexpr std::size_t kOracleGrid = 64;

double cos_sum(std::span<const double> alpha);

// Simplex grid followed by projected coordinate descent down to step 1e-8.
// Throws DimTooLarge for d > 7, BadDimension for d < 2, InvalidArgument for
// grid_points_per_axis < 8 or a negative cap.
MinimizationResult minimize_cos_sum(const RegionSpec& region,
                                    std::size_t grid_points_per_axis = kOracleGrid);

// (d-1) pi / 4, the region on which sum cos must stay above sqrt(d).
double theorem4_sum_cap(std::size_t d);
// 2 arccos((4 - sqrt 6)/2).
double d6_sum_cap();

bool verify_theorem4(std::size_t d, std::size_t grid = kOracleGrid);
// cap_factor scales the d = 6 region; 1 is the region itself.
bool verify_d6_refinement(double cap_factor = 1.0, std::size_t grid = kOracleGrid);

struct EtSearchResult {
  double grid_min = 0.0;
  double min_et = 0.0;  // after local refinement, never above grid_min
  std::vector<double> phases;
};

// Grid over phi in [0, 2 pi)^d with phi_0 = 0, then Nelder-Mead around the
// best point. d must be 3 or 4 and phase_grid in [1, 64].
EtSearchResult search_min_et(const OrderedBasis& dst, std::size_t phase_grid);
double min_et_for_transform(const OrderedBasis& dst, std::size_t phase_grid);

// {d, sum_cap, min_value, argmin, grid, refined}
std::string minimization_json(const RegionSpec& region, const MinimizationResult& result,
                              std::size_t grid_points_per_axis);

}  // namespace qsl

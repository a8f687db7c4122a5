#pragma once

#include <cstddef>

namespace psga {

/// Lower bound on the probability that the incumbent start node and size are
/// truly optimal after r stages:
///   1 - (k_max + m - 2) / 2 * alpha^(T / (r m k_max)).
/// Negative values (a vacuous bound) are returned unchanged.
double correct_selection_bound(std::size_t m, std::size_t k_max, std::size_t total_budget,
                               std::size_t stages, double alpha);

struct QualityBound {
  double incumbent_samples;  // N_b = (4 + m k_max (r - 1)) / (4 r m k_max) * T
  double quality_ratio;      // N_b * (1 / (N_b + 1))^(1 + 1/N_b), multiplies the optimum
};

QualityBound expected_quality_bound(std::size_t m, std::size_t k_max, std::size_t total_budget,
                                    std::size_t stages);

/// N_b * (1 / (N_b + 1))^(1 + 1/N_b).
double quality_ratio(double incumbent_samples);

}  // namespace psga

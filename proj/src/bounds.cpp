#include "psga/bounds.hpp"

#include <cmath>

#include "psga/error.hpp"

namespace psga {

double correct_selection_bound(std::size_t m, std::size_t k_max, std::size_t total_budget,
                               std::size_t stages, double alpha) {
  if (m == 0 || k_max == 0 || total_budget == 0 || stages == 0) {
    throw InvalidInput("bound arguments must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  const double exponent = static_cast<double>(total_budget) /
                          static_cast<double>(stages * m * k_max);
  return 1.0 - 0.5 * static_cast<double>(k_max + m - 2) * std::pow(alpha, exponent);
}

double quality_ratio(double n_b) {
  return n_b * std::pow(1.0 / (n_b + 1.0), 1.0 + 1.0 / n_b);
}

QualityBound expected_quality_bound(std::size_t m, std::size_t k_max, std::size_t total_budget,
                                    std::size_t stages) {
  if (m == 0 || k_max == 0 || total_budget == 0 || stages == 0) {
    throw InvalidInput("bound arguments must be positive");
  }
  const double mk = static_cast<double>(m * k_max);
  const double r = static_cast<double>(stages);
  const double n_b = (4.0 + mk * (r - 1.0)) / (4.0 * r * mk) * static_cast<double>(total_budget);
  return {n_b, quality_ratio(n_b)};
}

}  // namespace psga

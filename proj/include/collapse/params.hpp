#pragma once

#include <cmath>
#include <string>

#include "collapse/errors.hpp"

namespace collapse {

// Jump-model parameters: per-constituent collapse rate lambda (1/s) and
// localization length r_c (m).
struct CollapseParams {
  double lambda = 0.0;
  double r_c = 0.0;

  static CollapseParams make(double lambda, double r_c) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
      fail(Errc::negative_rate, "params: lambda must be >= 0, got " + std::to_string(lambda));
    if (!(r_c > 0.0) || !std::isfinite(r_c))
      fail(Errc::invalid_argument, "params: r_c must be positive");
    return CollapseParams{lambda, r_c};
  }

  double alpha() const { return 1.0 / (r_c * r_c); }
};

// Total jump rate for a bound system of n constituents (rigid amplification).
inline double effective_rate(const CollapseParams& p, double n_constituents) {
  if (!(n_constituents > 0.0) || !std::isfinite(n_constituents))
    fail(Errc::zero_constituents, "effective_rate: constituent count must be positive");
  return p.lambda * n_constituents;
}

}  // namespace collapse

#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "collapse/errors.hpp"

namespace collapse {

// Uniform 1D spatial grid with periodic topology.  Points sit at
// x_j = x_min + j dx for j = 0..n_points-1 with dx = (x_max - x_min)/n_points,
// so x_max is the periodic image of x_min and is not itself a stored point.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n_points = 0;

  static Grid1D make(double x_min, double x_max, std::size_t n_points) {
    if (!(std::isfinite(x_min) && std::isfinite(x_max)) || !(x_max > x_min))
      fail(Errc::invalid_argument, "grid: require finite x_max > x_min");
    if (n_points < 8 || (n_points & (n_points - 1)) != 0)
      fail(Errc::invalid_argument,
           "grid: n_points must be a power of two and at least 8, got " +
               std::to_string(n_points));
    return Grid1D{x_min, x_max, n_points};
  }

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n_points); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  double midpoint() const { return 0.5 * (x_min + x_max); }

  bool contains(double x) const { return x >= x_min && x <= x_max; }

  std::size_t nearest_index(double x) const {
    double j = std::round((x - x_min) / dx());
    if (j < 0.0) return 0;
    if (j >= static_cast<double>(n_points)) return n_points - 1;
    return static_cast<std::size_t>(j);
  }

  // Signed separation a - b folded into [-L/2, L/2].
  double periodic_delta(double a, double b) const { return std::remainder(a - b, length()); }

  // Index separation |i - j| folded onto the ring.
  std::size_t ring_distance(std::size_t i, std::size_t j) const {
    std::size_t d = i > j ? i - j : j - i;
    return d <= n_points / 2 ? d : n_points - d;
  }

  bool operator==(const Grid1D& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }
};

}  // namespace collapse

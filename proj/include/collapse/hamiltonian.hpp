#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"
#include "collapse/grid.hpp"

namespace collapse {

// One-body Hamiltonian: kinetic term plus an optional external potential.
// Masses live on the state, so the same Hamiltonian serves any particle.
// For two particles the potential acts on each coordinate separately
// (no interaction term).
class Hamiltonian {
 public:
  enum class Kind { free, harmonic, external };

  static Hamiltonian free_particle() { return Hamiltonian(Kind::free, 0.0, {}); }

  // V(x) = (1/2) m omega^2 (x - grid midpoint)^2.
  static Hamiltonian harmonic(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega))
      fail(Errc::invalid_argument, "hamiltonian: omega must be positive");
    return Hamiltonian(Kind::harmonic, omega, {});
  }

  // Tabulated potential in joules, one value per grid point.
  static Hamiltonian external(std::vector<double> potential) {
    for (double v : potential)
      if (!std::isfinite(v)) fail(Errc::invalid_argument, "hamiltonian: potential must be finite");
    return Hamiltonian(Kind::external, 0.0, std::move(potential));
  }

  Kind kind() const { return kind_; }
  double omega() const { return omega_; }

  bool has_potential() const { return kind_ != Kind::free; }

  // Potential values over the grid for a particle of the given mass.
  std::vector<double> potential_on(const Grid1D& g, double mass) const {
    std::vector<double> v(g.n_points, 0.0);
    switch (kind_) {
      case Kind::free:
        break;
      case Kind::harmonic: {
        double mid = g.midpoint();
        for (std::size_t j = 0; j < g.n_points; ++j) {
          double u = g.x(j) - mid;
          v[j] = 0.5 * mass * omega_ * omega_ * u * u;
        }
        break;
      }
      case Kind::external:
        if (tabulated_.size() != g.n_points)
          fail(Errc::invalid_argument, "hamiltonian: potential table does not match grid");
        v = tabulated_;
        break;
    }
    return v;
  }

  // Shortest intrinsic timescale, used to bound the splitting step.
  // Infinite for free motion.
  double min_period() const {
    return kind_ == Kind::harmonic ? 2.0 * constants::pi / omega_
                                   : std::numeric_limits<double>::infinity();
  }

 private:
  Hamiltonian(Kind k, double omega, std::vector<double> tab)
      : kind_(k), omega_(omega), tabulated_(std::move(tab)) {}

  Kind kind_;
  double omega_;
  std::vector<double> tabulated_;
};

}  // namespace collapse

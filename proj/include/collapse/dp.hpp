#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <tuple>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"

namespace collapse::dp {

// Gravitational self-energy of the difference between two mass
// distributions,
//   delta_e = 4 pi G * integral f(x) f(y) / |x - y| d3x d3y,  f = rho_1 - rho_2,
// reported as a non-negative magnitude, and the collapse-time estimate
// tau = hbar / delta_e.
//
// Every distribution is a sum of spherically symmetric primitives (uniform
// spheres and Gaussians).  For those the angular part of the pair energy is
// analytic: with F the antiderivative of Q(s) + s O(s) (Q = enclosed mass,
// O = the outer-shell potential integral), the sphere-averaged potential of
// component b seen at radius r from a centre at distance d is
//   phibar(r, d) = (F(r + d) - F(|r - d|)) / (2 r d),
// which absorbs the 1/|x - y| singularity completely.  Only the radial
// integral over the first component's profile is done numerically (adaptive
// Simpson with Richardson acceptance).

struct Component {
  enum class Kind { sphere, gaussian };
  Kind kind = Kind::sphere;
  double mass = 0.0;
  double size = 0.0;  // radius R for spheres, sigma for Gaussians
  std::array<double, 3> center{0.0, 0.0, 0.0};
};

class MassDistribution {
 public:
  static MassDistribution uniform_sphere(double mass, double radius,
                                         std::array<double, 3> center = {0, 0, 0}) {
    check(mass, radius, "uniform_sphere");
    MassDistribution d;
    d.comps_.push_back(Component{Component::Kind::sphere, mass, radius, center});
    return d;
  }

  static MassDistribution gaussian(double mass, double sigma,
                                   std::array<double, 3> center = {0, 0, 0}) {
    check(mass, sigma, "gaussian");
    MassDistribution d;
    d.comps_.push_back(Component{Component::Kind::gaussian, mass, sigma, center});
    return d;
  }

  // Point masses carry a divergent Coulomb self-energy, so each point is
  // smeared into a Gaussian of the given width; the width is part of the
  // model input, not a hidden regulator.
  static MassDistribution point_set(const std::vector<double>& masses,
                                    const std::vector<std::array<double, 3>>& positions,
                                    double smearing_radius) {
    if (masses.empty() || masses.size() != positions.size())
      fail(Errc::zero_constituents, "point_set: need matching, non-empty masses and positions");
    if (!(smearing_radius > 0.0) || !std::isfinite(smearing_radius))
      fail(Errc::invalid_argument, "point_set: smearing radius must be positive");
    MassDistribution d;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      check(masses[i], smearing_radius, "point_set");
      d.comps_.push_back(
          Component{Component::Kind::gaussian, masses[i], smearing_radius, positions[i]});
    }
    return d;
  }

  const std::vector<Component>& components() const { return comps_; }

  double total_mass() const {
    double m = 0.0;
    for (const Component& c : comps_) m += c.mass;
    return m;
  }

 private:
  static void check(double mass, double size, const char* who) {
    if (!(mass > 0.0) || !std::isfinite(mass))
      fail(Errc::zero_constituents, std::string(who) + ": mass must be positive");
    if (!(size > 0.0) || !std::isfinite(size))
      fail(Errc::invalid_argument, std::string(who) + ": size must be positive");
  }

  std::vector<Component> comps_;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  int max_depth = 40;
};

namespace detail {

// Mass enclosed within radius s.
inline double enclosed_mass(const Component& c, double s) {
  if (c.kind == Component::Kind::sphere) {
    if (s >= c.size) return c.mass;
    double u = s / c.size;
    return c.mass * u * u * u;
  }
  double u = s / (std::sqrt(2.0) * c.size);
  return c.mass * (std::erf(u) - 2.0 / std::sqrt(constants::pi) * u * std::exp(-u * u));
}

// O(s) = integral_s^inf 4 pi t rho(t) dt, the shell contribution to the
// potential from mass outside s.
inline double outer_shell(const Component& c, double s) {
  if (c.kind == Component::Kind::sphere) {
    if (s >= c.size) return 0.0;
    double r3 = c.size * c.size * c.size;
    return 1.5 * c.mass * (c.size * c.size - s * s) / r3;
  }
  return c.mass * std::sqrt(2.0 / constants::pi) * std::exp(-0.5 * s * s / (c.size * c.size)) /
         c.size;
}

// Newtonian potential per unit G: phi(s) = Q(s)/s + O(s).
inline double potential(const Component& c, double s) {
  if (s <= 0.0) return outer_shell(c, 0.0);
  return enclosed_mass(c, s) / s + outer_shell(c, s);
}

// Antiderivative of Q(s) + s O(s), zero at s = 0.
inline double antiderivative(const Component& c, double s) {
  if (c.kind == Component::Kind::sphere) {
    const double r = c.size;
    auto inside = [&](double t) {
      // integral of (M/R^3)(1.5 R^2 t - 0.5 t^3)
      return c.mass / (r * r * r) * (0.75 * r * r * t * t - 0.125 * t * t * t * t);
    };
    if (s <= r) return inside(s);
    return inside(r) + c.mass * (s - r);
  }
  double u = s / (std::sqrt(2.0) * c.size);
  return c.mass * (s * std::erf(u) +
                   c.size * std::sqrt(2.0 / constants::pi) * (std::exp(-u * u) - 1.0));
}

// Spherical average of component b's potential over the sphere of radius r
// centred at distance d from b.
inline double averaged_potential(const Component& b, double r, double d) {
  double scale = r + d + b.size;
  if (r * d < 1e-16 * scale * scale) return potential(b, std::sqrt(r * r + d * d));
  return (antiderivative(b, r + d) - antiderivative(b, std::abs(r - d))) / (2.0 * r * d);
}

inline double radial_density(const Component& c, double r) {
  if (c.kind == Component::Kind::sphere) {
    // closed boundary: the radial quadrature ends exactly at r = size, and
    // the endpoint value must agree with the inside limit or the adaptive
    // rule chases the jump forever
    if (r > c.size) return 0.0;
    return 3.0 * c.mass / (4.0 * constants::pi * c.size * c.size * c.size);
  }
  double s2 = c.size * c.size;
  return c.mass * std::pow(2.0 * constants::pi * s2, -1.5) * std::exp(-0.5 * r * r / s2);
}

struct QuadResult {
  double value = 0.0;
  double err = 0.0;
  bool converged = true;
};

template <class F>
void adaptive_simpson(const F& f, double a, double fa, double m, double fm, double b, double fb,
                      double whole, double tol, int depth, QuadResult& out) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double h = b - a;
  double left = h / 12.0 * (fa + 4.0 * flm + fm);
  double right = h / 12.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
    out.value += left + right + delta / 15.0;
    out.err += std::abs(delta) / 15.0;
    if (depth <= 0 && std::abs(delta) > 15.0 * tol) out.converged = false;
    return;
  }
  adaptive_simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1, out);
  adaptive_simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1, out);
}

template <class F>
QuadResult integrate(const F& f, std::vector<double> breaks, double rel_tol, int max_depth) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  // Coarse pass to establish an absolute tolerance scale.
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1], m = 0.5 * (a + b);
    scale += std::abs((b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b)));
  }
  double tol = std::max(rel_tol * scale, 1e-300);
  QuadResult out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1];
    if (!(b > a)) continue;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double seg_tol = tol * (b - a) / (breaks.back() - breaks.front());
    adaptive_simpson(f, a, fa, m, fm, b, fb, whole, seg_tol, max_depth, out);
  }
  return out;
}

// Pair energy integral rho_a . phi_b per unit G (no 4 pi prefactor).
inline QuadResult pair_energy(const Component& a, const Component& b, double d,
                              const QuadratureOptions& opt) {
  double r_max = a.kind == Component::Kind::sphere ? a.size : 10.0 * a.size;
  std::vector<double> breaks{0.0, r_max};
  auto add_break = [&](double r) {
    if (r > 0.0 && r < r_max) breaks.push_back(r);
  };
  add_break(d);
  if (b.kind == Component::Kind::sphere) {
    add_break(d - b.size);
    add_break(d + b.size);
  } else {
    add_break(d - b.size);  // curvature scale of the Gaussian potential
    add_break(d + b.size);
  }
  if (a.kind == Component::Kind::gaussian) add_break(a.size);
  auto f = [&](double r) {
    return 4.0 * constants::pi * r * r * radial_density(a, r) * averaged_potential(b, r, d);
  };
  return integrate(f, std::move(breaks), opt.rel_tol, opt.max_depth);
}

inline std::array<double, 7> pair_key(const Component& x, const Component& y, double d) {
  auto rank = [](const Component& c) {
    return std::make_tuple(static_cast<int>(c.kind), c.mass, c.size);
  };
  const Component *first = &x, *second = &y;
  if (rank(y) < rank(x)) std::swap(first, second);
  return {static_cast<double>(static_cast<int>(first->kind)),
          first->mass,
          first->size,
          static_cast<double>(static_cast<int>(second->kind)),
          second->mass,
          second->size,
          d};
}

}  // namespace detail

// See the header comment.  Exactly symmetric in its arguments and exactly
// zero for identical distributions: pair terms are aggregated by canonical
// (component, component, distance) keys with signed integer weights before
// any quadrature runs, so cancelling pairs never reach the integrator.
inline double delta_e(const MassDistribution& m1, const MassDistribution& m2,
                      const QuadratureOptions& opt = {}) {
  if (m1.components().empty() || m2.components().empty())
    fail(Errc::zero_constituents, "delta_e: empty mass distribution");

  struct Entry {
    Component a, b;
    double d = 0.0;
    double weight = 0.0;
  };
  std::map<std::array<double, 7>, Entry> terms;
  auto accumulate = [&](const Component& a, const Component& b, double sign) {
    double d = std::hypot(a.center[0] - b.center[0], a.center[1] - b.center[1],
                          a.center[2] - b.center[2]);
    auto key = detail::pair_key(a, b, d);
    auto it = terms.find(key);
    if (it == terms.end()) {
      Entry e;
      // Store the canonically ordered pair so the integral is evaluated
      // identically no matter which argument contributed it.
      bool swap = std::make_tuple(static_cast<int>(b.kind), b.mass, b.size) <
                  std::make_tuple(static_cast<int>(a.kind), a.mass, a.size);
      e.a = swap ? b : a;
      e.b = swap ? a : b;
      e.d = d;
      e.weight = sign;
      terms.emplace(key, e);
    } else {
      it->second.weight += sign;
    }
  };
  for (const Component& a : m1.components()) {
    for (const Component& b : m1.components()) accumulate(a, b, 1.0);
    for (const Component& b : m2.components()) accumulate(a, b, -2.0);  // both cross orders
  }
  for (const Component& a : m2.components())
    for (const Component& b : m2.components()) accumulate(a, b, 1.0);

  double acc = 0.0, err = 0.0, mag = 0.0;
  bool converged = true;
  for (const auto& [key, e] : terms) {
    if (e.weight == 0.0) continue;
    detail::QuadResult q = detail::pair_energy(e.a, e.b, e.d, opt);
    converged = converged && q.converged;
    acc += e.weight * q.value;
    err += std::abs(e.weight) * q.err;
    mag += std::abs(e.weight * q.value);
  }
  if (!converged || (mag > 0.0 && err > 5e-3 * std::max(std::abs(acc), 1e-6 * mag)))
    fail(Errc::quadrature_not_converged, "delta_e: refinement did not converge");
  double result = 4.0 * constants::pi * constants::gravitation * acc;
  double floor = 4.0 * constants::pi * constants::gravitation * (err + 1e-12 * mag);
  if (result < 0.0) {
    if (result < -floor) fail(Errc::negative_energy, "delta_e: negative beyond quadrature floor");
    result = 0.0;
  }
  return result;
}

// tau = hbar / delta_e, +infinity when delta_e = 0.
inline double collapse_time(double delta_e_value) {
  if (!(delta_e_value >= 0.0))
    fail(Errc::negative_energy, "collapse_time: delta_e must be >= 0");
  if (delta_e_value == 0.0) return std::numeric_limits<double>::infinity();
  return constants::hbar / delta_e_value;
}

}  // namespace collapse::dp

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"
#include "collapse/fft.hpp"
#include "collapse/grid.hpp"

namespace collapse {

using cplx = std::complex<double>;

// Discretized wave function for one or two distinguishable particles on a
// shared 1D grid.  Two-particle amplitudes are stored row-major:
// amp[i * n + j] = psi(x_i, x_j) with i the first particle's index.
//
// Width convention used throughout: a packet of width w is
//   psi(x) ~ exp(-(x - c)^2 / (2 w^2) + i p0 (x - c) / hbar),
// so Var(x) = w^2 / 2, Var(p) = hbar^2 / (2 w^2), and the zero-momentum
// kinetic energy is hbar^2 / (4 m w^2).
class WaveFunction {
 public:
  static WaveFunction zero(const Grid1D& grid, std::vector<double> masses) {
    if (masses.empty() || masses.size() > 2)
      fail(Errc::invalid_argument, "state: supports 1 or 2 particles");
    for (double m : masses)
      if (!(m > 0.0) || !std::isfinite(m))
        fail(Errc::invalid_argument, "state: masses must be positive and finite");
    WaveFunction w;
    w.grid_ = grid;
    w.masses_ = std::move(masses);
    std::size_t size = grid.n_points;
    if (w.masses_.size() == 2) size *= grid.n_points;
    w.amp_.assign(size, cplx{0.0, 0.0});
    return w;
  }

  const Grid1D& grid() const { return grid_; }
  std::size_t n_particles() const { return masses_.size(); }
  const std::vector<double>& masses() const { return masses_; }
  double mass(std::size_t i) const { return masses_.at(i); }

  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  std::size_t size() const { return amp_.size(); }

  // Volume element of the configuration space: dx for one particle, dx^2 for two.
  double dvol() const {
    double dx = grid_.dx();
    return n_particles() == 2 ? dx * dx : dx;
  }

  cplx& at(std::size_t i) { return amp_[i]; }
  cplx& at(std::size_t i, std::size_t j) { return amp_[i * grid_.n_points + j]; }
  cplx at(std::size_t i) const { return amp_[i]; }
  cplx at(std::size_t i, std::size_t j) const { return amp_[i * grid_.n_points + j]; }

  double norm_squared() const {
    double s = 0.0;
    for (const cplx& a : amp_) s += std::norm(a);
    return s * dvol();
  }
  double norm() const { return std::sqrt(norm_squared()); }

  void scale(double f) {
    for (cplx& a : amp_) a *= f;
  }

  void normalize() {
    double n = norm();
    if (!(n > 0.0) || !std::isfinite(n))
      fail(Errc::not_normalized, "state: cannot normalize zero or non-finite state");
    scale(1.0 / n);
  }

 private:
  Grid1D grid_;
  std::vector<double> masses_;
  std::vector<cplx> amp_;
};

inline bool normalized(const WaveFunction& s, double tol = 1e-9) {
  return std::abs(s.norm() - 1.0) <= tol;
}

inline void require_normalized(const WaveFunction& s, const char* op) {
  if (!normalized(s))
    fail(Errc::not_normalized, std::string(op) + ": state norm " + std::to_string(s.norm()) +
                                   " differs from 1 beyond 1e-9");
}

// Normalized Gaussian packet.  Requires width >= 4 dx (resolvable on the
// grid) and at least 5 widths of clearance to each domain edge.
inline WaveFunction gaussian_packet(const Grid1D& grid, double mass, double center, double width,
                                    double momentum = 0.0) {
  if (!(width > 0.0) || !std::isfinite(width))
    fail(Errc::invalid_argument, "gaussian_packet: width must be positive");
  if (width < 4.0 * grid.dx())
    fail(Errc::grid_too_coarse, "gaussian_packet: width " + std::to_string(width) +
                                    " below 4 dx = " + std::to_string(4.0 * grid.dx()));
  if (center - 5.0 * width < grid.x_min || center + 5.0 * width > grid.x_max)
    fail(Errc::out_of_domain, "gaussian_packet: need 5 widths of margin inside the domain");
  WaveFunction s = WaveFunction::zero(grid, {mass});
  const double k = momentum / constants::hbar;
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    double u = grid.x(j) - center;
    s.at(j) = std::polar(std::exp(-u * u / (2.0 * width * width)), k * u);
  }
  s.normalize();
  return s;
}

// Superposition of two packets of the given width centred at
// midpoint -/+ separation/2, with amplitudes renormalized so
// |amp_left|^2 + |amp_right|^2 = 1.
inline WaveFunction two_peak_superposition(const Grid1D& grid, double mass, double separation,
                                           double width, cplx amp_left, cplx amp_right) {
  if (!(separation >= 0.0) || !std::isfinite(separation))
    fail(Errc::invalid_argument, "two_peak_superposition: separation must be >= 0");
  double s2 = std::norm(amp_left) + std::norm(amp_right);
  if (!(s2 > 0.0))
    fail(Errc::invalid_argument, "two_peak_superposition: amplitudes are both zero");
  double inv = 1.0 / std::sqrt(s2);
  amp_left *= inv;
  amp_right *= inv;
  double mid = grid.midpoint();
  WaveFunction left = gaussian_packet(grid, mass, mid - 0.5 * separation, width);
  WaveFunction right = gaussian_packet(grid, mass, mid + 0.5 * separation, width);
  WaveFunction out = WaveFunction::zero(grid, {mass});
  for (std::size_t j = 0; j < grid.n_points; ++j)
    out.at(j) = amp_left * left.at(j) + amp_right * right.at(j);
  out.normalize();
  return out;
}

// Two-particle product state a(x1) b(x2).  Grids must match.
inline WaveFunction product_state(const WaveFunction& a, const WaveFunction& b) {
  if (a.n_particles() != 1 || b.n_particles() != 1)
    fail(Errc::invalid_argument, "product_state: factors must be single-particle");
  if (!(a.grid() == b.grid())) fail(Errc::invalid_argument, "product_state: grids differ");
  WaveFunction out = WaveFunction::zero(a.grid(), {a.mass(0), b.mass(0)});
  std::size_t n = a.grid().n_points;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = a.at(i) * b.at(j);
  return out;
}

// wa * a + wb * b, not normalized.
inline WaveFunction superpose(cplx wa, const WaveFunction& a, cplx wb, const WaveFunction& b) {
  if (!(a.grid() == b.grid()) || a.masses() != b.masses())
    fail(Errc::invalid_argument, "superpose: states live on different spaces");
  WaveFunction out = WaveFunction::zero(a.grid(), a.masses());
  for (std::size_t i = 0; i < a.size(); ++i)
    out.amplitudes()[i] = wa * a.amplitudes()[i] + wb * b.amplitudes()[i];
  return out;
}

inline cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid() == b.grid()) || a.size() != b.size())
    fail(Errc::invalid_argument, "inner_product: states live on different spaces");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  return s * a.dvol();
}

inline double fidelity(const WaveFunction& a, const WaveFunction& b) {
  return std::abs(inner_product(a, b));
}

struct MassDensityField {
  Grid1D grid;
  std::vector<double> values;  // kg / m, integrates to the total mass
};

// Expected mass density sum_i m_i |psi|^2 marginalised onto the grid.
inline MassDensityField mass_density(const WaveFunction& s) {
  const Grid1D& g = s.grid();
  std::size_t n = g.n_points;
  MassDensityField f{g, std::vector<double>(n, 0.0)};
  if (s.n_particles() == 1) {
    for (std::size_t j = 0; j < n; ++j) f.values[j] = s.mass(0) * std::norm(s.at(j));
  } else {
    double dx = g.dx();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double w = std::norm(s.at(i, j)) * dx;
        f.values[i] += s.mass(0) * w;
        f.values[j] += s.mass(1) * w;
      }
  }
  return f;
}

struct Observables {
  double norm = 0.0;
  double mean_x = 0.0;        // centre of mass for two particles
  double var_x = 0.0;
  double mean_p = 0.0;        // total momentum for two particles
  double kinetic_energy = 0.0;
};

namespace detail {

inline double k_value(const Grid1D& g, std::size_t j) {
  auto n = g.n_points;
  double s = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
  return 2.0 * constants::pi * s / g.length();
}

}  // namespace detail

// Position moments by quadrature, momentum and kinetic energy spectrally.
// For two particles mean_x / var_x describe the centre of mass
// (m1 x1 + m2 x2) / (m1 + m2), mean_p the total momentum, and
// kinetic_energy the sum over particles.
inline Observables observables(const WaveFunction& s) {
  const Grid1D& g = s.grid();
  const std::size_t n = g.n_points;
  Observables o;
  o.norm = s.norm();
  double w2 = o.norm * o.norm;
  const double hbar = constants::hbar;

  if (s.n_particles() == 1) {
    double sx = 0.0, sxx = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double q = std::norm(s.at(j)) * g.dx();
      sx += q * g.x(j);
      sxx += q * g.x(j) * g.x(j);
    }
    o.mean_x = sx / w2;
    o.var_x = sxx / w2 - o.mean_x * o.mean_x;

    std::vector<cplx> f(s.amplitudes());
    fft::forward(f);
    double sp = 0.0, ske = 0.0, stot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double k = detail::k_value(g, j);
      double q = std::norm(f[j]);
      stot += q;
      sp += q * hbar * k;
      ske += q * hbar * hbar * k * k / (2.0 * s.mass(0));
    }
    o.mean_p = sp / stot;
    o.kinetic_energy = ske / stot;
    return o;
  }

  const double m1 = s.mass(0), m2 = s.mass(1), mt = m1 + m2;
  double sx = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double q = std::norm(s.at(i, j)) * s.dvol();
      double xc = (m1 * g.x(i) + m2 * g.x(j)) / mt;
      sx += q * xc;
      sxx += q * xc * xc;
    }
  o.mean_x = sx / w2;
  o.var_x = sxx / w2 - o.mean_x * o.mean_x;

  std::vector<cplx> f(s.amplitudes());
  fft::forward_2d(f, n, n);
  double sp = 0.0, ske = 0.0, stot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double k1 = detail::k_value(g, i);
    for (std::size_t j = 0; j < n; ++j) {
      double k2 = detail::k_value(g, j);
      double q = std::norm(f[i * n + j]);
      stot += q;
      sp += q * hbar * (k1 + k2);
      ske += q * hbar * hbar * (k1 * k1 / (2.0 * m1) + k2 * k2 / (2.0 * m2));
    }
  }
  o.mean_p = sp / stot;
  o.kinetic_energy = ske / stot;
  return o;
}

// Probability carried by grid points within [lo, hi].
inline double probability_in(const WaveFunction& s, double lo, double hi) {
  const Grid1D& g = s.grid();
  std::size_t n = g.n_points;
  double p = 0.0;
  if (s.n_particles() == 1) {
    for (std::size_t j = 0; j < n; ++j)
      if (g.x(j) >= lo && g.x(j) <= hi) p += std::norm(s.at(j)) * g.dx();
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (g.x(i) >= lo && g.x(i) <= hi && g.x(j) >= lo && g.x(j) <= hi)
          p += std::norm(s.at(i, j)) * s.dvol();
  }
  return p;
}

}  // namespace collapse

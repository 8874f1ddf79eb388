#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"
#include "collapse/fft.hpp"
#include "collapse/hamiltonian.hpp"
#include "collapse/wavefunction.hpp"

namespace collapse {

// Split-step spectral propagator (Strang splitting exp(-iV dt/2) exp(-iT dt)
// exp(-iV dt/2) in units of hbar).  For a free Hamiltonian the kinetic phase
// is the exact evolution for any dt.  Periodic boundary conditions are
// inherited from the FFT; states are expected to stay away from the edges,
// and a step that leaks probability into the outer bands raises
// AbsorbedAtBoundary instead of silently wrapping.

namespace detail {

inline std::vector<cplx> kinetic_phase(const Grid1D& g, double mass, double dt) {
  std::vector<cplx> ph(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j) {
    double k = k_value(g, j);
    ph[j] = std::polar(1.0, -constants::hbar * k * k / (2.0 * mass) * dt);
  }
  return ph;
}

inline std::vector<cplx> potential_half_phase(const std::vector<double>& v, double dt) {
  std::vector<cplx> ph(v.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    ph[j] = std::polar(1.0, -0.5 * v[j] * dt / constants::hbar);
  return ph;
}

struct StrangPhases {
  std::vector<cplx> vhalf;            // empty when the Hamiltonian is free
  std::vector<cplx> kin1, kin2;       // kin2 empty for one particle
};

inline StrangPhases build_phases(const WaveFunction& s, const Hamiltonian& h, double dt) {
  StrangPhases p;
  if (h.has_potential()) {
    // Two-particle potential is V(x1) + V(x2); mass enters the harmonic case,
    // so build per-particle tables and fold them at application time.
    p.vhalf = potential_half_phase(h.potential_on(s.grid(), s.mass(0)), dt);
  }
  p.kin1 = kinetic_phase(s.grid(), s.mass(0), dt);
  if (s.n_particles() == 2) p.kin2 = kinetic_phase(s.grid(), s.mass(1), dt);
  return p;
}

inline void apply_strang(WaveFunction& s, const Hamiltonian& h, const StrangPhases& p) {
  const std::size_t n = s.grid().n_points;
  auto& a = s.amplitudes();
  if (s.n_particles() == 1) {
    if (!p.vhalf.empty())
      for (std::size_t j = 0; j < n; ++j) a[j] *= p.vhalf[j];
    fft::forward(a);
    for (std::size_t j = 0; j < n; ++j) a[j] *= p.kin1[j];
    fft::inverse(a);
    if (!p.vhalf.empty())
      for (std::size_t j = 0; j < n; ++j) a[j] *= p.vhalf[j];
    return;
  }
  // Two particles.  The caller guarantees p.vhalf is valid for both
  // coordinates here (the unequal-mass harmonic case takes a separate path
  // in step()).
  (void)h;
  if (!p.vhalf.empty()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= p.vhalf[i] * p.vhalf[j];
  }
  fft::forward_2d(a, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= p.kin1[i] * p.kin2[j];
  fft::inverse_2d(a, n, n);
  if (!p.vhalf.empty()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= p.vhalf[i] * p.vhalf[j];
  }
}

}  // namespace detail

// Fraction of probability in the outermost 5% of grid points on each side
// (summed over both sides; for two particles, the larger of the two
// single-coordinate marginals).
inline double boundary_mass(const WaveFunction& s) {
  const Grid1D& g = s.grid();
  const std::size_t n = g.n_points;
  const std::size_t nb = std::max<std::size_t>(1, n / 20);
  auto in_band = [&](std::size_t j) { return j < nb || j >= n - nb; };
  if (s.n_particles() == 1) {
    double p = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (in_band(j)) p += std::norm(s.at(j)) * g.dx();
    return p;
  }
  double p1 = 0.0, p2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double w = std::norm(s.at(i, j)) * s.dvol();
      if (in_band(i)) p1 += w;
      if (in_band(j)) p2 += w;
    }
  return std::max(p1, p2);
}

inline void check_boundary(const WaveFunction& s) {
  double p = boundary_mass(s);
  if (p > 1e-6)
    fail(Errc::absorbed_at_boundary,
         "propagator: probability " + std::to_string(p) + " reached the domain edge");
}

// One Strang step of size dt.  dt must be positive; a harmonic Hamiltonian
// additionally requires dt <= (2 pi / omega) / 20 (StepTooLarge).
inline void step(WaveFunction& s, const Hamiltonian& h, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(Errc::non_positive_step, "propagator: dt must be positive and finite");
  if (dt > h.min_period() / 20.0)
    fail(Errc::step_too_large, "propagator: dt exceeds 1/20 of the Hamiltonian period");
  if (s.n_particles() == 2 && h.kind() == Hamiltonian::Kind::harmonic && s.mass(1) != s.mass(0)) {
    // Unequal masses in a harmonic trap need separate half-phases.
    const std::size_t n = s.grid().n_points;
    auto v1 = detail::potential_half_phase(h.potential_on(s.grid(), s.mass(0)), dt);
    auto v2 = detail::potential_half_phase(h.potential_on(s.grid(), s.mass(1)), dt);
    auto k1 = detail::kinetic_phase(s.grid(), s.mass(0), dt);
    auto k2 = detail::kinetic_phase(s.grid(), s.mass(1), dt);
    auto& a = s.amplitudes();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= v1[i] * v2[j];
    fft::forward_2d(a, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= k1[i] * k2[j];
    fft::inverse_2d(a, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= v1[i] * v2[j];
    check_boundary(s);
    return;
  }
  detail::StrangPhases p = detail::build_phases(s, h, dt);
  detail::apply_strang(s, h, p);
  check_boundary(s);
}

// Evolve for t_total using whole steps of dt plus one fractional remainder.
// t_total = 0 is a no-op.
inline void evolve(WaveFunction& s, const Hamiltonian& h, double t_total, double dt) {
  if (!(t_total >= 0.0) || !std::isfinite(t_total))
    fail(Errc::invalid_argument, "propagator: t_total must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(Errc::non_positive_step, "propagator: dt must be positive and finite");
  if (t_total == 0.0) return;
  if (dt > h.min_period() / 20.0)
    fail(Errc::step_too_large, "propagator: dt exceeds 1/20 of the Hamiltonian period");
  const double n_whole_f = std::floor(t_total / dt);
  const auto n_whole = static_cast<long long>(n_whole_f);
  const double rem = t_total - n_whole_f * dt;
  if (n_whole > 0) {
    detail::StrangPhases p = detail::build_phases(s, h, dt);
    bool special = s.n_particles() == 2 && h.kind() == Hamiltonian::Kind::harmonic &&
                   s.mass(1) != s.mass(0);
    for (long long i = 0; i < n_whole; ++i) {
      if (special) {
        step(s, h, dt);
      } else {
        detail::apply_strang(s, h, p);
        check_boundary(s);
      }
    }
  }
  if (rem > 1e-12 * dt) step(s, h, rem);
}

}  // namespace collapse

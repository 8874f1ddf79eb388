#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/density_matrix.hpp"
#include "collapse/errors.hpp"
#include "collapse/fft.hpp"
#include "collapse/hamiltonian.hpp"
#include "collapse/params.hpp"
#include "collapse/propagator.hpp"

namespace collapse::master {

// Ensemble-level description of the jump process.  Averaging the jump update
// over centres and firing times turns the off-diagonal damping into
//   d rho(x,x') / dt |_collapse = -Gamma(|x - x'|) rho(x,x'),
// with the two-point decay rate below.  lambda in the params is the total
// jump rate of the system (amplified rate for a composite).

// Gamma(d) = lambda (1 - exp(-alpha d^2 / 4)).  Vanishes quadratically at
// d = 0 and saturates at lambda for d >> r_c.
inline double decay_kernel(double separation, const CollapseParams& p) {
  if (!(separation >= 0.0) || !std::isfinite(separation))
    fail(Errc::invalid_argument, "decay_kernel: separation must be >= 0 and finite");
  return p.lambda * (-std::expm1(-0.25 * p.alpha() * separation * separation));
}

namespace detail {

inline void check_valid(const DensityMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-6)
    fail(Errc::invalid_argument, "master: input trace differs from 1");
  if (rho.hermiticity_error() > 1e-8)
    fail(Errc::invalid_argument, "master: input is not Hermitian");
}

// The exact map keeps rho Hermitian; the FFT sandwich leaks an
// anti-Hermitian residue of order 1e-15 per step, which accumulates
// linearly and would eventually trip check_valid on a follow-up call.
// Projecting back onto the Hermitian subspace after each step keeps
// piecewise evolution self-consistent.
inline void resymmetrize(DensityMatrix& rho) {
  const std::size_t n = rho.n();
  auto& el = rho.elements();
  for (std::size_t i = 0; i < n; ++i) {
    el[i * n + i] = cplx{el[i * n + i].real(), 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx avg = 0.5 * (el[i * n + j] + std::conj(el[j * n + i]));
      el[i * n + j] = avg;
      el[j * n + i] = std::conj(avg);
    }
  }
}

// K rho K^dag for K = F^-1 diag(kin) F applied symmetrically.
inline void kinetic_sandwich(DensityMatrix& rho, const std::vector<cplx>& kin) {
  const std::size_t n = rho.n();
  auto& el = rho.elements();
  std::vector<cplx> buf(n);
  // First index: columns, stride n.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) buf[i] = el[i * n + j];
    fft::forward(buf);
    for (std::size_t i = 0; i < n; ++i) buf[i] *= kin[i];
    fft::inverse(buf);
    for (std::size_t i = 0; i < n; ++i) el[i * n + j] = buf[i];
  }
  // Second index with the conjugate operator: conj, apply K, conj.
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = el.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) buf[j] = std::conj(row[j]);
    fft::forward(buf);
    for (std::size_t j = 0; j < n; ++j) buf[j] *= kin[j];
    fft::inverse(buf);
    for (std::size_t j = 0; j < n; ++j) row[j] = std::conj(buf[j]);
  }
}

}  // namespace detail

// Evolve rho for t_total with Strang steps: half collapse damping, one
// unitary step, half damping.  Damping factors use the periodic grid
// separation, matching what the jump trajectories see.  The diagonal is
// untouched by damping (Gamma(0) = 0), so the trace is conserved to FFT
// roundoff.
inline void evolve_density_matrix(DensityMatrix& rho, const Hamiltonian& h,
                                  const CollapseParams& params, double t_total, double dt) {
  if (!(t_total >= 0.0) || !std::isfinite(t_total))
    fail(Errc::invalid_argument, "master: t_total must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(Errc::non_positive_step, "master: dt must be positive and finite");
  if (dt > h.min_period() / 20.0)
    fail(Errc::step_too_large, "master: dt exceeds 1/20 of the Hamiltonian period");
  detail::check_valid(rho);
  if (t_total == 0.0) return;

  const Grid1D& g = rho.grid();
  const std::size_t n = g.n_points;

  auto make_decay_half = [&](double step_dt) {
    std::vector<double> d(n / 2 + 1);
    for (std::size_t m = 0; m <= n / 2; ++m) {
      double sep = static_cast<double>(m) * g.dx();
      d[m] = std::exp(-0.5 * decay_kernel(sep, params) * step_dt);
    }
    return d;
  };
  auto run_steps = [&](double step_dt, long long count) {
    if (count <= 0) return;
    std::vector<double> decay_half = make_decay_half(step_dt);
    std::vector<cplx> kin = collapse::detail::kinetic_phase(g, rho.mass(), step_dt);
    std::vector<cplx> vhalf;
    if (h.has_potential()) {
      std::vector<double> v = h.potential_on(g, rho.mass());
      vhalf = collapse::detail::potential_half_phase(v, step_dt);
    }
    auto& el = rho.elements();
    for (long long s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) el[i * n + j] *= decay_half[g.ring_distance(i, j)];
      if (!vhalf.empty())
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) el[i * n + j] *= vhalf[i] * std::conj(vhalf[j]);
      detail::kinetic_sandwich(rho, kin);
      if (!vhalf.empty())
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) el[i * n + j] *= vhalf[i] * std::conj(vhalf[j]);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) el[i * n + j] *= decay_half[g.ring_distance(i, j)];
      detail::resymmetrize(rho);
    }
  };

  const double n_whole_f = std::floor(t_total / dt);
  run_steps(dt, static_cast<long long>(n_whole_f));
  const double rem = t_total - n_whole_f * dt;
  if (rem > 1e-12 * dt) run_steps(rem, 1);
}

struct DecayFit {
  double rate = 0.0;          // fitted exponential rate, > 0
  double magnitude = 0.0;     // fitted value at t = 0
  double rms_residual = 0.0;  // in log space
};

// Least-squares fit of |y| = A exp(-rate t) through log-space.  Needs
// positive magnitudes and a positive fitted rate (NonDecaying otherwise).
inline DecayFit fit_exponential(const std::vector<double>& times,
                                const std::vector<double>& magnitudes,
                                std::size_t min_samples = 3) {
  if (times.size() != magnitudes.size() || times.size() < min_samples)
    fail(Errc::invalid_argument, "fit_exponential: too few paired samples");
  double st = 0, sy = 0, stt = 0, sty = 0;
  const auto n = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(magnitudes[i] > 0.0))
      fail(Errc::non_decaying, "fit_exponential: non-positive magnitude in series");
    double t = times[i], y = std::log(magnitudes[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  double denom = n * stt - st * st;
  if (!(std::abs(denom) > 0.0))
    fail(Errc::invalid_argument, "fit_exponential: degenerate time samples");
  double slope = (n * sty - st * sy) / denom;
  double intercept = (sy - slope * st) / n;
  if (!(slope < 0.0)) fail(Errc::non_decaying, "fit_exponential: series does not decay");
  double ss = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double r = std::log(magnitudes[i]) - (intercept + slope * times[i]);
    ss += r * r;
  }
  return DecayFit{-slope, std::exp(intercept), std::sqrt(ss / n)};
}

// Decay rate of |rho(x1, x2)| across a series of density matrices sampled at
// the given times (nearest grid points are used).  Needs at least five
// samples.
inline DecayFit offdiag_decay_fit(const std::vector<double>& times,
                                  const std::vector<DensityMatrix>& rhos, double x1, double x2) {
  if (times.size() != rhos.size() || times.size() < 5)
    fail(Errc::invalid_argument, "offdiag_decay_fit: need >= 5 sampled matrices");
  const Grid1D& g = rhos.front().grid();
  std::size_t i = g.nearest_index(x1), j = g.nearest_index(x2);
  std::vector<double> mag(times.size());
  for (std::size_t k = 0; k < rhos.size(); ++k) mag[k] = std::abs(rhos[k].at(i, j));
  return fit_exponential(times, mag, 5);
}

}  // namespace collapse::master

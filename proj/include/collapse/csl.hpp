#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"
#include "collapse/grid.hpp"
#include "collapse/hamiltonian.hpp"
#include "collapse/params.hpp"
#include "collapse/propagator.hpp"
#include "collapse/record.hpp"
#include "collapse/rng.hpp"
#include "collapse/wavefunction.hpp"

namespace collapse::csl {

// Continuous localization driven by a spatially correlated white-noise
// field.  The coupling operator for centre c is the smeared density
//   A_c = sum_i mu_i g(x_i - c),  g(u) = (alpha/pi)^(1/4) exp(-alpha u^2 / 2),
// with mu_i = 1 (number coupling) or m_i / m0 (mass-proportional).  The
// norm-preserving unraveling updates a normalized state by
//   psi <- psi [1 + sqrt(gamma) (W - <W>) - (gamma/2) ((A - <A>)^2 integrated
//   over centres) dt]
// followed by renormalization (Euler-Maruyama, weak order 1).  Noise
// increments are cell-integrated Wiener increments xi_j ~ N(0, dx dt), so a
// realization refines consistently across grid resolutions (coarse
// increments are sums of fine ones).

enum class Coupling { number, mass_proportional };

struct CslParams {
  double gamma = 0.0;  // collapse strength, 1/s at unit coupling
  double r_c = 0.0;
  double reference_mass = constants::reference_mass;  // nucleon mass for mass coupling
  Coupling coupling = Coupling::number;

  static CslParams make(double gamma, double r_c, Coupling coupling = Coupling::number,
                        double reference_mass = constants::reference_mass) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
      fail(Errc::negative_rate, "csl: gamma must be >= 0");
    if (!(r_c > 0.0) || !std::isfinite(r_c)) fail(Errc::invalid_argument, "csl: r_c must be positive");
    if (!(reference_mass > 0.0)) fail(Errc::invalid_argument, "csl: reference mass must be positive");
    return CslParams{gamma, r_c, reference_mass, coupling};
  }

  double alpha() const { return 1.0 / (r_c * r_c); }
};

// GRW-rate-matched CSL parameters: number coupling with gamma = lambda gives
// the ensemble decoherence kernel gamma (1 - exp(-alpha d^2/4)) for a single
// particle of any mass, identical to the jump-model kernel.
inline CslParams match_parameters(const CollapseParams& p) {
  return CslParams::make(p.lambda, p.r_c, Coupling::number);
}

inline double coupling_weight(const CslParams& p, double mass) {
  return p.coupling == Coupling::mass_proportional ? mass / p.reference_mass : 1.0;
}

namespace detail {

struct FieldTable {
  std::vector<double> g;  // smearing kernel at ring distance m * dx
  std::vector<double> k;  // two-point correlation exp(-alpha u^2 / 4)
};

inline const FieldTable& field_table(const Grid1D& grid, const CslParams& p) {
  thread_local std::map<std::tuple<std::size_t, double, double>, FieldTable> cache;
  auto key = std::make_tuple(grid.n_points, grid.dx(), p.alpha());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  FieldTable t;
  const double alpha = p.alpha();
  const double camp = std::pow(alpha / constants::pi, 0.25);
  const std::size_t half = grid.n_points / 2;
  t.g.resize(half + 1);
  t.k.resize(half + 1);
  for (std::size_t m = 0; m <= half; ++m) {
    double u = static_cast<double>(m) * grid.dx();
    t.g[m] = camp * std::exp(-0.5 * alpha * u * u);
    t.k[m] = std::exp(-0.25 * alpha * u * u);
  }
  return cache.emplace(key, std::move(t)).first->second;
}

// Kernel table unwrapped to a full ring row, krow[m] = kernel[ring_distance(0, m)],
// so the convolution loop can index with a power-of-two mask instead of the
// branchy folded distance.  This is the per-step hot path.
inline std::vector<double> unwrap_ring(const Grid1D& g, const std::vector<double>& kernel) {
  const std::size_t n = g.n_points;
  const std::size_t half = n / 2;
  std::vector<double> krow(n);
  for (std::size_t m = 0; m < n; ++m) krow[m] = kernel[m <= half ? m : n - m];
  return krow;
}

inline std::vector<double> ring_convolve(const Grid1D& g, const std::vector<double>& kernel,
                                         const std::vector<double>& v) {
  const std::size_t n = g.n_points;
  const std::size_t mask = n - 1;  // n is a power of two by construction
  std::vector<double> krow = unwrap_ring(g, kernel);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += krow[(j - i) & mask] * v[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace detail

// Number of independent noise increments consumed per step: one per grid cell.
inline std::size_t noise_modes(const Grid1D& g) { return g.n_points; }

// One step's worth of driving noise.  increments[j] is the white-noise
// integral over cell j and the step, N(0, dx dt); summing neighbouring cells
// (or consecutive steps) refines consistently, and the smeared field built
// from a path has variance dt per grid mode.
struct NoisePath {
  double dt = 0.0;
  std::vector<double> increments;

  static NoisePath draw(const Grid1D& g, double dt, Rng& rng) {
    if (!(dt > 0.0) || !std::isfinite(dt))
      fail(Errc::non_positive_step, "noise_path: dt must be positive");
    NoisePath p;
    p.dt = dt;
    p.increments.resize(noise_modes(g));
    const double sd = std::sqrt(g.dx() * dt);
    for (double& x : p.increments) x = rng.normal() * sd;
    return p;
  }
};

// One Euler-Maruyama step with caller-supplied increments (variance dx dt
// each).  Order: unitary substep, then the stochastic multiplicative update,
// then renormalization.  The pre-renormalization norm must stay within 1e-3
// of 1, otherwise StepTooLarge: reduce dt or the coupling.
inline void csl_step_with_noise(WaveFunction& state, const Hamiltonian& h, const CslParams& params,
                                double dt, std::span<const double> increments) {
  require_normalized(state, "csl_step");
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(Errc::non_positive_step, "csl_step: dt must be positive and finite");
  collapse::step(state, h, dt);
  if (params.gamma == 0.0) return;
  const Grid1D& g = state.grid();
  const std::size_t n = g.n_points;
  if (increments.size() != noise_modes(g))
    fail(Errc::invalid_argument, "csl_step: wrong number of noise increments");

  const auto& tab = detail::field_table(g, params);
  const double gamma = params.gamma;

  // Smeared field at each grid point, W_i = sum_j g(x_i - x_j) xi_j.
  std::vector<double> xi(increments.begin(), increments.end());
  std::vector<double> w = detail::ring_convolve(g, tab.g, xi);

  auto& a = state.amplitudes();
  if (state.n_particles() == 1) {
    const double mu = coupling_weight(params, state.mass(0));
    std::vector<double> q(n);
    for (std::size_t j = 0; j < n; ++j) q[j] = std::norm(a[j]) * state.dvol();
    std::vector<double> s = detail::ring_convolve(g, tab.k, q);
    double wbar = 0.0, sbar = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      wbar += q[j] * w[j];
      sbar += q[j] * s[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      double drift = 1.0 - 2.0 * s[j] + sbar;
      double upd = std::sqrt(gamma) * mu * (w[j] - wbar) - 0.5 * gamma * mu * mu * drift * dt;
      a[j] *= 1.0 + upd;
    }
  } else {
    const double mu1 = coupling_weight(params, state.mass(0));
    const double mu2 = coupling_weight(params, state.mass(1));
    std::vector<double> q1(n, 0.0), q2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double p = std::norm(a[i * n + j]) * state.dvol();
        q1[i] += p;
        q2[j] += p;
      }
    std::vector<double> t(n);
    for (std::size_t j = 0; j < n; ++j) t[j] = mu1 * q1[j] + mu2 * q2[j];
    std::vector<double> kt = detail::ring_convolve(g, tab.k, t);
    double wbar = 0.0, tkt = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      wbar += (mu1 * q1[j] + mu2 * q2[j]) * w[j];
      tkt += t[j] * kt[j];
    }
    const double diag = mu1 * mu1 + mu2 * mu2;
    const double root = std::sqrt(gamma);
    const std::size_t mask = n - 1;
    std::vector<double> krow = detail::unwrap_ring(g, tab.k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double wij = mu1 * w[i] + mu2 * w[j];
        double dij = diag + 2.0 * mu1 * mu2 * krow[(j - i) & mask] -
                     2.0 * (mu1 * kt[i] + mu2 * kt[j]) + tkt;
        a[i * n + j] *= 1.0 + root * (wij - wbar) - 0.5 * gamma * dij * dt;
      }
  }

  double nn = state.norm();
  if (std::abs(nn - 1.0) > 1e-3)
    fail(Errc::step_too_large,
         "csl_step: norm correction " + std::to_string(std::abs(nn - 1.0)) +
             " exceeds 1e-3; reduce dt or the coupling");
  state.scale(1.0 / nn);
}

// Draws the increments from rng (one normal per grid cell, in index order).
inline void csl_step(WaveFunction& state, const Hamiltonian& h, const CslParams& params, double dt,
                     Rng& rng) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(Errc::non_positive_step, "csl_step: dt must be positive and finite");
  if (params.gamma == 0.0) {
    require_normalized(state, "csl_step");
    collapse::step(state, h, dt);
    return;
  }
  NoisePath noise = NoisePath::draw(state.grid(), dt, rng);
  csl_step_with_noise(state, h, params, dt, noise.increments);
}

struct TrajectoryOptions {
  double t_final = 0.0;
  double dt = 0.0;
  std::vector<double> sample_times;  // ascending, each <= t_final
};

struct TrajectoryResult {
  std::vector<SampleRecord> samples;
  WaveFunction final_state;
};

// Diffusive trajectory with snapshots at the requested times.  Steps use a
// fixed dt, shortened when a sample time or t_final lands inside a step; the
// noise variance follows the actual step length, so the path stays a valid
// discretization.
inline TrajectoryResult run_csl_trajectory(const WaveFunction& initial, const Hamiltonian& h,
                                           const CslParams& params, const TrajectoryOptions& opt,
                                           Rng& rng) {
  require_normalized(initial, "run_csl_trajectory");
  if (!(opt.t_final >= 0.0) || !std::isfinite(opt.t_final))
    fail(Errc::invalid_argument, "run_csl_trajectory: t_final must be >= 0");
  if (!(opt.dt > 0.0)) fail(Errc::non_positive_step, "run_csl_trajectory: dt must be positive");
  for (std::size_t i = 0; i < opt.sample_times.size(); ++i) {
    double t = opt.sample_times[i];
    if (!(t >= 0.0) || t > opt.t_final || (i > 0 && t < opt.sample_times[i - 1]))
      fail(Errc::invalid_argument,
           "run_csl_trajectory: sample_times must ascend within [0, t_final]");
  }
  TrajectoryResult res;
  WaveFunction state = initial;
  double t = 0.0;
  std::size_t next_sample = 0;
  auto record = [&](double time) {
    res.samples.push_back(SampleRecord{time, observables(state), state});
  };
  const double t_eps = 1e-12 * std::max(1.0, opt.t_final);
  while (true) {
    while (next_sample < opt.sample_times.size() && opt.sample_times[next_sample] <= t + t_eps) {
      record(opt.sample_times[next_sample]);
      ++next_sample;
    }
    if (t >= opt.t_final - t_eps) break;
    double t_stop = std::min(opt.t_final, t + opt.dt);
    if (next_sample < opt.sample_times.size()) t_stop = std::min(t_stop, opt.sample_times[next_sample]);
    csl_step(state, h, params, t_stop - t, rng);
    t = t_stop;
  }
  res.final_state = std::move(state);
  return res;
}

}  // namespace collapse::csl

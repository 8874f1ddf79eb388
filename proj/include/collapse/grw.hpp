#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
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

namespace collapse::grw {

// Spontaneous localization as a piecewise-deterministic jump process.  The
// hitting operator centred at c,
//   L_c(x) = (alpha/pi)^(1/4) exp(-alpha (x - c)^2 / 2),  alpha = 1/r_c^2,
// is normalized so that the family is complete: integral over centres of
// L_c(x)^2 dc = 1 for every x.  A jump replaces psi by L_c psi / ||L_c psi||
// with the centre drawn from p(c) = ||L_c psi||^2.  Distances are taken
// modulo the periodic domain so completeness holds on the grid as well.

namespace detail {

struct KernelTable {
  std::vector<double> amp;   // L at ring distance m * dx
  std::vector<double> prob;  // L^2 at ring distance m * dx
};

inline const KernelTable& kernel_table(const Grid1D& g, const CollapseParams& p) {
  thread_local std::map<std::tuple<std::size_t, double, double>, KernelTable> cache;
  auto key = std::make_tuple(g.n_points, g.dx(), p.alpha());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  KernelTable t;
  const double alpha = p.alpha();
  const double camp = std::pow(alpha / constants::pi, 0.25);
  const double cprob = std::sqrt(alpha / constants::pi);
  const std::size_t half = g.n_points / 2;
  t.amp.resize(half + 1);
  t.prob.resize(half + 1);
  for (std::size_t m = 0; m <= half; ++m) {
    double u = static_cast<double>(m) * g.dx();
    t.amp[m] = camp * std::exp(-0.5 * alpha * u * u);
    t.prob[m] = cprob * std::exp(-alpha * u * u);
  }
  return cache.emplace(key, std::move(t)).first->second;
}

// |psi|^2 dx marginal for either particle coordinate.
inline std::vector<double> coordinate_weights(const WaveFunction& s, std::size_t particle) {
  const std::size_t n = s.grid().n_points;
  std::vector<double> q(n, 0.0);
  if (s.n_particles() == 1) {
    for (std::size_t j = 0; j < n; ++j) q[j] = std::norm(s.at(j)) * s.dvol();
    return q;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double w = std::norm(s.at(i, j)) * s.dvol();
      q[particle == 0 ? i : j] += w;
    }
  return q;
}

}  // namespace detail

// L_c sampled on the grid for an arbitrary centre inside the domain.
inline std::vector<double> localization_kernel(const Grid1D& g, const CollapseParams& p,
                                               double center) {
  if (!g.contains(center))
    fail(Errc::out_of_domain, "localization_kernel: centre outside the domain");
  const double alpha = p.alpha();
  const double camp = std::pow(alpha / constants::pi, 0.25);
  std::vector<double> out(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j) {
    double u = g.periodic_delta(g.x(j), center);
    out[j] = camp * std::exp(-0.5 * alpha * u * u);
  }
  return out;
}

// Jump-centre density p(c_k) = ||L_{c_k} psi||^2 over grid centres, for a
// hit on the given particle's coordinate.  Integrates to 1 over centres.
inline std::vector<double> collapse_probability_density(const WaveFunction& s,
                                                        const CollapseParams& p,
                                                        std::size_t particle = 0) {
  require_normalized(s, "collapse_probability_density");
  if (particle >= s.n_particles())
    fail(Errc::invalid_argument, "collapse_probability_density: no such particle");
  const Grid1D& g = s.grid();
  const std::size_t n = g.n_points;
  const auto& tab = detail::kernel_table(g, p);
  std::vector<double> q = detail::coordinate_weights(s, particle);
  // unwrap the folded table so the correlation loop indexes with a mask
  // (n is a power of two); this is the per-jump hot path
  const std::size_t half = n / 2;
  const std::size_t mask = n - 1;
  std::vector<double> prow(n);
  for (std::size_t m = 0; m < n; ++m) prow[m] = tab.prob[m <= half ? m : n - m];
  std::vector<double> density(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += prow[(i - k) & mask] * q[i];
    density[k] = acc;
  }
  return density;
}

// psi -> L_c psi / ||L_c psi|| applied to the given particle coordinate.
inline void apply_collapse(WaveFunction& s, const CollapseParams& p, double center,
                           std::size_t particle = 0) {
  if (particle >= s.n_particles())
    fail(Errc::invalid_argument, "apply_collapse: no such particle");
  const Grid1D& g = s.grid();
  std::vector<double> kern = localization_kernel(g, p, center);
  const std::size_t n = g.n_points;
  if (s.n_particles() == 1) {
    for (std::size_t j = 0; j < n; ++j) s.at(j) *= kern[j];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s.at(i, j) *= kern[particle == 0 ? i : j];
  }
  double n2 = s.norm_squared();
  if (!(std::sqrt(n2) > 1e-12))
    fail(Errc::empty_posterior, "apply_collapse: state has no support near the centre");
  s.scale(1.0 / std::sqrt(n2));
}

// Draw a jump centre (a grid point) for the given particle by inverse CDF
// over the discrete centre density.
inline double sample_collapse_center(const WaveFunction& s, const CollapseParams& p,
                                     std::size_t particle, Rng& rng) {
  const Grid1D& g = s.grid();
  const std::size_t n = g.n_points;
  std::vector<double> density = collapse_probability_density(s, p, particle);
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += density[k] * g.dx();
    cum[k] = acc;
  }
  if (!(acc > 0.0)) fail(Errc::empty_posterior, "sample_collapse_center: zero density");
  double u = rng.uniform() * acc;
  std::size_t k = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
  if (k >= n) k = n - 1;
  return g.x(k);
}

// Exponential waiting time; rate 0 means the jump never fires.
inline double sample_waiting_time(double rate, Rng& rng) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    fail(Errc::negative_rate, "sample_waiting_time: rate must be >= 0");
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return rng.exponential_unit() / rate;
}

struct CollapseEvent {
  double time = 0.0;
  double center = 0.0;
  std::size_t particle = 0;
};

struct TrajectoryOptions {
  double t_final = 0.0;
  double dt = 0.0;                   // unitary substep
  double collapse_rate = 0.0;        // jump rate per particle (amplified for composites)
  std::vector<double> sample_times;  // ascending, each <= t_final
};

struct TrajectoryResult {
  std::vector<SampleRecord> samples;
  std::vector<CollapseEvent> events;
  WaveFunction final_state;
};

// One jump-process trajectory: deterministic Schroedinger segments
// interleaved with exponentially-timed jumps.  Each particle carries its own
// independent Poisson clock at collapse_rate; a firing clock samples a
// centre from that particle's density and hits that coordinate.  RNG draws
// happen in a fixed order (initial clocks in particle order, then per event:
// centre, refreshed clock), so a trajectory is reproducible from its seed.
inline TrajectoryResult run_trajectory(const WaveFunction& initial, const Hamiltonian& h,
                                       const CollapseParams& params,
                                       const TrajectoryOptions& opt, Rng& rng) {
  require_normalized(initial, "run_trajectory");
  if (!(opt.t_final >= 0.0) || !std::isfinite(opt.t_final))
    fail(Errc::invalid_argument, "run_trajectory: t_final must be >= 0");
  if (!(opt.dt > 0.0)) fail(Errc::non_positive_step, "run_trajectory: dt must be positive");
  for (std::size_t i = 0; i < opt.sample_times.size(); ++i) {
    double t = opt.sample_times[i];
    if (!(t >= 0.0) || t > opt.t_final || (i > 0 && t < opt.sample_times[i - 1]))
      fail(Errc::invalid_argument, "run_trajectory: sample_times must ascend within [0, t_final]");
  }

  TrajectoryResult res;
  WaveFunction state = initial;
  double t = 0.0;
  std::size_t next_sample = 0;
  std::vector<double> t_jump(state.n_particles());
  for (double& tj : t_jump) tj = sample_waiting_time(opt.collapse_rate, rng);

  auto record = [&](double time) {
    res.samples.push_back(SampleRecord{time, observables(state), state});
  };
  const double t_eps = 1e-12 * std::max(1.0, opt.t_final);

  while (true) {
    while (next_sample < opt.sample_times.size() && opt.sample_times[next_sample] <= t + t_eps) {
      record(opt.sample_times[next_sample]);
      ++next_sample;
    }
    std::size_t jump_particle = 0;
    for (std::size_t i = 1; i < t_jump.size(); ++i)
      if (t_jump[i] < t_jump[jump_particle]) jump_particle = i;
    double t_stop = opt.t_final;
    bool is_sample = false, is_jump = false;
    if (next_sample < opt.sample_times.size() && opt.sample_times[next_sample] < t_stop) {
      t_stop = opt.sample_times[next_sample];
      is_sample = true;
    }
    if (t_jump[jump_particle] < t_stop) {
      t_stop = t_jump[jump_particle];
      is_sample = false;
      is_jump = true;
    }
    if (t_stop > t) evolve(state, h, t_stop - t, opt.dt);
    t = t_stop;
    if (is_jump) {
      double center = sample_collapse_center(state, params, jump_particle, rng);
      apply_collapse(state, params, center, jump_particle);
      res.events.push_back(CollapseEvent{t, center, jump_particle});
      t_jump[jump_particle] = t + sample_waiting_time(opt.collapse_rate, rng);
      continue;
    }
    if (is_sample) {
      record(opt.sample_times[next_sample]);
      ++next_sample;
      continue;
    }
    break;  // reached t_final
  }
  // samples landing exactly on t_final are only reachable here
  while (next_sample < opt.sample_times.size() && opt.sample_times[next_sample] <= t + t_eps) {
    record(opt.sample_times[next_sample]);
    ++next_sample;
  }
  res.final_state = std::move(state);
  return res;
}

}  // namespace collapse::grw

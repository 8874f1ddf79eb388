#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "collapse/bounds.hpp"
#include "collapse/config.hpp"
#include "collapse/csl.hpp"
#include "collapse/csv.hpp"
#include "collapse/dp.hpp"
#include "collapse/errors.hpp"
#include "collapse/grw.hpp"
#include "collapse/master.hpp"
#include "collapse/parallel.hpp"
#include "collapse/propagator.hpp"
#include "collapse/rng.hpp"

// Experiment drivers behind the command line tool.  Each driver validates its
// config against a fixed schema (unknown keys rejected, every field
// range-checked), runs the computation, and returns a CSV table whose header
// echoes the effective configuration so results are reproducible from the
// file alone.  Trajectory ensembles draw per-trajectory RNG streams from
// (seed, trajectory index), so outputs are byte-identical for any thread
// count and extending an ensemble never changes earlier trajectories.

namespace collapse {

struct ExperimentResult {
  std::string kind;
  CsvTable table;
};

namespace detail {

class Echo {
 public:
  void num(const std::string& k, double v) { items_.emplace_back(k, format_double(v)); }
  void integer(const std::string& k, std::uint64_t v) { items_.emplace_back(k, std::to_string(v)); }
  void str(const std::string& k, const std::string& v) { items_.emplace_back(k, v); }
  void list(const std::string& k, const std::vector<double>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) s += ',';
      s += format_double(vs[i]);
    }
    items_.emplace_back(k, s);
  }
  std::vector<std::pair<std::string, std::string>> take() { return std::move(items_); }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

inline void require_increasing(const std::vector<double>& ts, const std::string& field) {
  double prev = 0.0;
  for (double t : ts) {
    if (!(t > prev))
      fail(Errc::config_invalid, "field '" + field + "': times must be positive and increasing");
    prev = t;
  }
}

// Shared scalar fields of the trajectory-ensemble experiments.
struct EnsembleSetup {
  Grid1D grid;
  CollapseParams params;
  double mass = 0.0;
  double separation = 0.0;
  double width = 0.0;
  double dt = 0.0;
  std::uint64_t trajectories = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

inline EnsembleSetup parse_ensemble(ConfigView& v, Echo& echo, bool with_separation) {
  EnsembleSetup s;
  std::uint64_t n_points = v.integer("n_points", 8, 1u << 20);
  double x_min = v.number("x_min", -1e9, 1e9);
  double x_max = v.number("x_max", -1e9, 1e9);
  double lambda = v.number("lambda", 0.0, 1e30);
  double r_c = v.number("r_c", 1e-30, 1e6);
  s.mass = v.number("mass", 1e-40, 1e6);
  if (with_separation) s.separation = v.number("separation", 0.0, 1e9);
  s.width = v.number("width", 1e-30, 1e9);
  s.dt = v.number("dt", 1e-30, 1e9);
  s.trajectories = v.integer("trajectories", 1, 1000000000ull);
  s.seed = v.integer_or("seed", 0, 0, UINT64_MAX);
  s.threads = static_cast<unsigned>(v.integer_or("threads", 0, 0, 4096));
  v.string_or("out", "");
  s.grid = Grid1D::make(x_min, x_max, static_cast<std::size_t>(n_points));
  s.params = CollapseParams::make(lambda, r_c);
  echo.integer("n_points", n_points);
  echo.num("x_min", x_min);
  echo.num("x_max", x_max);
  echo.num("lambda", lambda);
  echo.num("r_c", r_c);
  echo.num("mass", s.mass);
  if (with_separation) echo.num("separation", s.separation);
  echo.num("width", s.width);
  return s;
}

inline std::pair<double, double> linear_fit(const std::vector<double>& t,
                                            const std::vector<double>& y) {
  double n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  double denom = n * stt - st * st;
  if (!(std::abs(denom) > 0.0)) fail(Errc::invalid_argument, "linear_fit: degenerate abscissae");
  double slope = (n * sty - st * sy) / denom;
  return {slope, (sy - slope * st) / n};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// grw_born: jump trajectories on a two-peak superposition; the fraction of
// runs settling into the left peak estimates the Born weight |amp_left|^2.

inline ExperimentResult run_grw_born(const Config& cfg) {
  ConfigView v(cfg);
  detail::Echo echo;
  v.keyword("kind", {"grw_born"});
  echo.str("kind", "grw_born");
  detail::EnsembleSetup s = detail::parse_ensemble(v, echo, true);
  double amp_left_sq = v.number("amp_left_sq", 0.0, 1.0);
  double t_final = v.number("t_final", 1e-30, 1e9);
  v.finish();
  echo.num("amp_left_sq", amp_left_sq);
  echo.num("t_final", t_final);
  echo.num("dt", s.dt);
  echo.integer("trajectories", s.trajectories);
  echo.integer("seed", s.seed);

  WaveFunction psi0 =
      two_peak_superposition(s.grid, s.mass, s.separation, s.width,
                             cplx{std::sqrt(amp_left_sq), 0.0},
                             cplx{std::sqrt(1.0 - amp_left_sq), 0.0});
  Hamiltonian ham = Hamiltonian::free_particle();
  grw::TrajectoryOptions opt;
  opt.t_final = t_final;
  opt.dt = s.dt;
  opt.collapse_rate = s.params.lambda;

  struct Partial {
    std::vector<std::array<double, 4>> rows;
    double left = 0.0;
    double events = 0.0;
  };
  const double mid = s.grid.midpoint();
  auto partials = blocked_map<Partial>(
      s.trajectories, 256, s.threads, [&](std::size_t i, Partial& p) {
        Rng rng(stream_seed(s.seed, i));
        grw::TrajectoryResult r = grw::run_trajectory(psi0, ham, s.params, opt, rng);
        double mass_left = probability_in(r.final_state, s.grid.x_min, mid);
        double went_left = mass_left > 0.5 ? 1.0 : 0.0;
        double mean_x = observables(r.final_state).mean_x;
        p.rows.push_back({static_cast<double>(i), went_left, mean_x,
                          static_cast<double>(r.events.size())});
        p.left += went_left;
        p.events += static_cast<double>(r.events.size());
      });

  CsvTable t;
  t.columns = {"trajectory", "went_left", "final_mean_x", "n_events"};
  double left = 0.0, events = 0.0;
  for (const auto& p : partials) {
    for (const auto& row : p.rows) t.rows.push_back({row[0], row[1], row[2], row[3]});
    left += p.left;
    events += p.events;
  }
  double n = static_cast<double>(s.trajectories);
  t.summary.emplace_back("left_frequency", format_double(left / n));
  t.summary.emplace_back("expected_left", format_double(amp_left_sq));
  t.summary.emplace_back("mean_events", format_double(events / n));
  t.config_echo = echo.take();
  return ExperimentResult{"grw_born", std::move(t)};
}

// ---------------------------------------------------------------------------
// grw_vs_master / csl_vs_master: ensemble-averaged trajectories against the
// deterministic master equation, compared by trace distance at sample times.

namespace detail {

struct RhoPartial {
  std::vector<DensityMatrix> rho;  // one accumulator per sample time
};

template <class RunOne>
std::vector<DensityMatrix> ensemble_density(const EnsembleSetup& s,
                                            const std::vector<double>& sample_times,
                                            RunOne run_one) {
  const double w = 1.0 / static_cast<double>(s.trajectories);
  auto partials = blocked_map<RhoPartial>(
      s.trajectories, 256, s.threads, [&](std::size_t i, RhoPartial& p) {
        if (p.rho.empty())
          for (std::size_t k = 0; k < sample_times.size(); ++k)
            p.rho.push_back(DensityMatrix::zero(s.grid, s.mass));
        std::vector<WaveFunction> states = run_one(i);
        for (std::size_t k = 0; k < sample_times.size(); ++k) p.rho[k].add_pure(states[k], w);
      });
  std::vector<DensityMatrix> rho;
  for (std::size_t k = 0; k < sample_times.size(); ++k)
    rho.push_back(DensityMatrix::zero(s.grid, s.mass));
  for (const auto& p : partials)
    for (std::size_t k = 0; k < p.rho.size(); ++k) {
      const auto& src = p.rho[k].elements();
      auto& dst = rho[k].elements();
      for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += src[e];
    }
  return rho;
}

inline ExperimentResult ensemble_vs_master(const Config& cfg, const std::string& kind) {
  ConfigView v(cfg);
  Echo echo;
  v.keyword("kind", {kind});
  echo.str("kind", kind);
  EnsembleSetup s = parse_ensemble(v, echo, true);
  std::vector<double> sample_times = v.number_list("sample_times", 1e-30, 1e9, 1);
  v.finish();
  require_increasing(sample_times, "sample_times");
  echo.list("sample_times", sample_times);
  echo.num("dt", s.dt);
  echo.integer("trajectories", s.trajectories);
  echo.integer("seed", s.seed);

  WaveFunction psi0 = two_peak_superposition(s.grid, s.mass, s.separation, s.width,
                                             cplx{1.0, 0.0}, cplx{1.0, 0.0});
  Hamiltonian ham = Hamiltonian::free_particle();
  const double t_final = sample_times.back();

  std::vector<DensityMatrix> rho_ens;
  if (kind == "grw_vs_master") {
    grw::TrajectoryOptions opt;
    opt.t_final = t_final;
    opt.dt = s.dt;
    opt.collapse_rate = s.params.lambda;
    opt.sample_times = sample_times;
    rho_ens = ensemble_density(s, sample_times, [&](std::size_t i) {
      Rng rng(stream_seed(s.seed, i));
      grw::TrajectoryResult r = grw::run_trajectory(psi0, ham, s.params, opt, rng);
      std::vector<WaveFunction> states;
      for (auto& rec : r.samples) states.push_back(std::move(rec.state));
      return states;
    });
  } else {
    csl::CslParams cp = csl::match_parameters(s.params);
    csl::TrajectoryOptions opt;
    opt.t_final = t_final;
    opt.dt = s.dt;
    opt.sample_times = sample_times;
    rho_ens = ensemble_density(s, sample_times, [&](std::size_t i) {
      Rng rng(stream_seed(s.seed, i));
      csl::TrajectoryResult r = csl::run_csl_trajectory(psi0, ham, cp, opt, rng);
      std::vector<WaveFunction> states;
      for (auto& rec : r.samples) states.push_back(std::move(rec.state));
      return states;
    });
  }

  DensityMatrix rho_m = DensityMatrix::from_pure(psi0);
  CsvTable t;
  t.columns = {"time", "trace_distance", "ensemble_purity", "master_purity"};
  double t_prev = 0.0, max_td = 0.0;
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    master::evolve_density_matrix(rho_m, ham, s.params, sample_times[k] - t_prev, s.dt);
    t_prev = sample_times[k];
    double td = trace_distance(rho_ens[k], rho_m);
    max_td = std::max(max_td, td);
    t.rows.push_back({sample_times[k], td, rho_ens[k].purity(), rho_m.purity()});
  }
  t.summary.emplace_back("max_trace_distance", format_double(max_td));
  t.config_echo = echo.take();
  return ExperimentResult{kind, std::move(t)};
}

}  // namespace detail

inline ExperimentResult run_grw_vs_master(const Config& cfg) {
  return detail::ensemble_vs_master(cfg, "grw_vs_master");
}

inline ExperimentResult run_csl_vs_master(const Config& cfg) {
  return detail::ensemble_vs_master(cfg, "csl_vs_master");
}

// ---------------------------------------------------------------------------
// amplification: decay rate of the joint |LL> + |RR> coherence for two
// particles against the single-particle rate (expected ratio 2), plus the
// composite rate-multiplication rule evaluated at tabletop numbers.

inline ExperimentResult run_amplification(const Config& cfg) {
  ConfigView v(cfg);
  detail::Echo echo;
  v.keyword("kind", {"amplification"});
  echo.str("kind", "amplification");
  detail::EnsembleSetup s = detail::parse_ensemble(v, echo, true);
  std::vector<double> sample_times = v.number_list("sample_times", 1e-30, 1e9, 5);
  v.finish();
  detail::require_increasing(sample_times, "sample_times");
  echo.list("sample_times", sample_times);
  echo.num("dt", s.dt);
  echo.integer("trajectories", s.trajectories);
  echo.integer("seed", s.seed);

  const double mid = s.grid.midpoint();
  WaveFunction u_left = gaussian_packet(s.grid, s.mass, mid - 0.5 * s.separation, s.width);
  WaveFunction u_right = gaussian_packet(s.grid, s.mass, mid + 0.5 * s.separation, s.width);
  WaveFunction psi1 = two_peak_superposition(s.grid, s.mass, s.separation, s.width,
                                             cplx{1.0, 0.0}, cplx{1.0, 0.0});
  WaveFunction u_ll = product_state(u_left, u_left);
  WaveFunction u_rr = product_state(u_right, u_right);
  WaveFunction psi2 = superpose(cplx{1.0, 0.0}, u_ll, cplx{1.0, 0.0}, u_rr);
  psi2.normalize();

  Hamiltonian ham = Hamiltonian::free_particle();
  grw::TrajectoryOptions opt;
  opt.t_final = sample_times.back();
  opt.dt = s.dt;
  opt.collapse_rate = s.params.lambda;
  opt.sample_times = sample_times;

  struct Partial {
    std::vector<cplx> c;  // coherence sum per sample time
  };
  const std::size_t n_samples = sample_times.size();
  auto run_set = [&](const WaveFunction& psi0, const WaveFunction& ua, const WaveFunction& ub,
                     std::uint64_t stream_base) {
    auto partials = blocked_map<Partial>(
        s.trajectories, 256, s.threads, [&](std::size_t i, Partial& p) {
          if (p.c.empty()) p.c.assign(n_samples, cplx{0.0, 0.0});
          Rng rng(stream_seed(s.seed, stream_base + i));
          grw::TrajectoryResult r = grw::run_trajectory(psi0, ham, s.params, opt, rng);
          for (std::size_t k = 0; k < n_samples; ++k) {
            const WaveFunction& st = r.samples[k].state;
            p.c[k] += inner_product(ua, st) * inner_product(st, ub);
          }
        });
    std::vector<cplx> c(n_samples, cplx{0.0, 0.0});
    for (const auto& p : partials)
      for (std::size_t k = 0; k < p.c.size(); ++k) c[k] += p.c[k];
    for (auto& z : c) z /= static_cast<double>(s.trajectories);
    return c;
  };

  std::vector<cplx> c1 = run_set(psi1, u_left, u_right, 0);
  std::vector<cplx> c2 = run_set(psi2, u_ll, u_rr, s.trajectories);

  std::vector<double> m1(n_samples), m2(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    m1[k] = std::abs(c1[k]);
    m2[k] = std::abs(c2[k]);
  }
  master::DecayFit f1 = master::fit_exponential(sample_times, m1);
  master::DecayFit f2 = master::fit_exponential(sample_times, m2);
  double predicted = master::decay_kernel(s.separation, s.params);

  CsvTable t;
  t.columns = {"time", "coherence_single", "coherence_pair"};
  for (std::size_t k = 0; k < n_samples; ++k) t.rows.push_back({sample_times[k], m1[k], m2[k]});
  t.summary.emplace_back("rate_single", format_double(f1.rate));
  t.summary.emplace_back("rate_pair", format_double(f2.rate));
  t.summary.emplace_back("rate_ratio", format_double(f2.rate / f1.rate));
  t.summary.emplace_back("predicted_single", format_double(predicted));
  t.summary.emplace_back("predicted_pair", format_double(2.0 * predicted));
  CollapseParams tabletop = CollapseParams::make(1e-16, s.params.r_c);
  t.summary.emplace_back("composite_rate_1e24",
                         format_double(effective_rate(tabletop, 1e24)));
  t.config_echo = echo.take();
  return ExperimentResult{"amplification", std::move(t)};
}

// ---------------------------------------------------------------------------
// energy_growth: ensemble-mean kinetic energy of a resting packet under jump
// dynamics; the slope is compared with the closed-form heating rate.

inline ExperimentResult run_energy_growth(const Config& cfg) {
  ConfigView v(cfg);
  detail::Echo echo;
  v.keyword("kind", {"energy_growth"});
  echo.str("kind", "energy_growth");
  detail::EnsembleSetup s = detail::parse_ensemble(v, echo, false);
  std::vector<double> sample_times = v.number_list("sample_times", 1e-30, 1e9, 2);
  v.finish();
  detail::require_increasing(sample_times, "sample_times");
  echo.list("sample_times", sample_times);
  echo.num("dt", s.dt);
  echo.integer("trajectories", s.trajectories);
  echo.integer("seed", s.seed);

  WaveFunction psi0 = gaussian_packet(s.grid, s.mass, s.grid.midpoint(), s.width);
  Hamiltonian ham = Hamiltonian::free_particle();
  grw::TrajectoryOptions opt;
  opt.t_final = sample_times.back();
  opt.dt = s.dt;
  opt.collapse_rate = s.params.lambda;
  opt.sample_times = sample_times;

  struct Partial {
    std::vector<double> ke;
  };
  const std::size_t n_samples = sample_times.size();
  auto partials = blocked_map<Partial>(
      s.trajectories, 256, s.threads, [&](std::size_t i, Partial& p) {
        if (p.ke.empty()) p.ke.assign(n_samples, 0.0);
        Rng rng(stream_seed(s.seed, i));
        grw::TrajectoryResult r = grw::run_trajectory(psi0, ham, s.params, opt, rng);
        for (std::size_t k = 0; k < n_samples; ++k)
          p.ke[k] += r.samples[k].obs.kinetic_energy;
      });
  std::vector<double> ke(n_samples, 0.0);
  for (const auto& p : partials)
    for (std::size_t k = 0; k < p.ke.size(); ++k) ke[k] += p.ke[k];
  for (auto& e : ke) e /= static_cast<double>(s.trajectories);

  auto [slope, intercept] = detail::linear_fit(sample_times, ke);
  double predicted = bounds::heating_rate(s.params, s.mass, 1.0);

  CsvTable t;
  t.columns = {"time", "kinetic_energy"};
  for (std::size_t k = 0; k < n_samples; ++k) t.rows.push_back({sample_times[k], ke[k]});
  t.summary.emplace_back("fitted_slope", format_double(slope));
  t.summary.emplace_back("fitted_intercept", format_double(intercept));
  t.summary.emplace_back("predicted_rate", format_double(predicted));
  t.summary.emplace_back("relative_error",
                         format_double(std::abs(slope - predicted) / predicted));
  t.config_echo = echo.take();
  return ExperimentResult{"energy_growth", std::move(t)};
}

// ---------------------------------------------------------------------------
// dp_tau: gravitational self-energy gap and collapse time for a rigid body
// superposed at a sweep of separations.

inline ExperimentResult run_dp_tau(const Config& cfg) {
  ConfigView v(cfg);
  detail::Echo echo;
  v.keyword("kind", {"dp_tau"});
  echo.str("kind", "dp_tau");
  std::string shape = v.keyword("shape", {"sphere", "gaussian"});
  double mass = v.number("mass", 1e-40, 1e9);
  double size = v.number("size", 1e-30, 1e9);
  std::vector<double> separations = v.number_list("separations", 0.0, 1e9, 1);
  v.integer_or("seed", 0, 0, UINT64_MAX);
  v.integer_or("threads", 0, 0, 4096);
  v.string_or("out", "");
  v.finish();
  echo.str("shape", shape);
  echo.num("mass", mass);
  echo.num("size", size);
  echo.list("separations", separations);

  auto make_body = [&](double center) {
    std::array<double, 3> at{center, 0.0, 0.0};
    return shape == "sphere" ? dp::MassDistribution::uniform_sphere(mass, size, at)
                             : dp::MassDistribution::gaussian(mass, size, at);
  };
  CsvTable t;
  t.columns = {"separation", "delta_e", "tau"};
  dp::MassDistribution here = make_body(0.0);
  for (double d : separations) {
    double de = dp::delta_e(here, make_body(d));
    t.rows.push_back({d, de, dp::collapse_time(de)});
  }
  t.config_echo = echo.take();
  return ExperimentResult{"dp_tau", std::move(t)};
}

// ---------------------------------------------------------------------------
// visibility_bound: invert the interferometric visibility prediction into an
// upper bound on lambda for each assumed r_c.

inline ExperimentResult run_visibility_bound(const Config& cfg) {
  ConfigView v(cfg);
  detail::Echo echo;
  v.keyword("kind", {"visibility_bound"});
  echo.str("kind", "visibility_bound");
  double mass_amu = v.number("mass_amu", 1e-30, 1e40);
  double separation = v.number("separation", 1e-30, 1e9);
  double duration = v.number("duration", 1e-30, 1e9);
  double floor = v.number("visibility_floor", 1e-12, 1.0);
  std::vector<double> r_c_values = v.number_list("r_c", 1e-30, 1e6, 1);
  v.integer_or("seed", 0, 0, UINT64_MAX);
  v.integer_or("threads", 0, 0, 4096);
  v.string_or("out", "");
  v.finish();
  echo.num("mass_amu", mass_amu);
  echo.num("separation", separation);
  echo.num("duration", duration);
  echo.num("visibility_floor", floor);
  echo.list("r_c", r_c_values);

  bounds::InterferometryExperiment e =
      bounds::InterferometryExperiment::make(mass_amu, separation, duration, floor);
  CsvTable t;
  t.columns = {"r_c", "lambda_upper", "visibility_at_bound"};
  std::string model, notes;
  for (double r_c : r_c_values) {
    bounds::BoundResult b = bounds::lambda_upper_bound(e, r_c);
    t.rows.push_back({r_c, b.lambda_upper, bounds::visibility(e, b.lambda_upper, r_c)});
    model = b.model;
    notes = b.notes;
  }
  t.summary.emplace_back("model", model);
  t.summary.emplace_back("notes", notes);
  t.config_echo = echo.take();
  return ExperimentResult{"visibility_bound", std::move(t)};
}

// ---------------------------------------------------------------------------

inline ExperimentResult run_experiment(const Config& cfg) {
  const std::string* kind = cfg.find("kind");
  if (!kind) fail(Errc::config_invalid, "missing required field 'kind'");
  if (*kind == "grw_born") return run_grw_born(cfg);
  if (*kind == "grw_vs_master") return run_grw_vs_master(cfg);
  if (*kind == "csl_vs_master") return run_csl_vs_master(cfg);
  if (*kind == "amplification") return run_amplification(cfg);
  if (*kind == "energy_growth") return run_energy_growth(cfg);
  if (*kind == "dp_tau") return run_dp_tau(cfg);
  if (*kind == "visibility_bound") return run_visibility_bound(cfg);
  fail(Errc::config_invalid,
       "field 'kind': '" + *kind +
           "' is not one of {grw_born, grw_vs_master, csl_vs_master, amplification, "
           "energy_growth, dp_tau, visibility_bound}");
}

// Companion matplotlib script for a written CSV.  Log axes where the
// quantities span decades.
inline void emit_plot_script(const ExperimentResult& res, const std::string& csv_path,
                             const std::string& script_path) {
  bool loglog = res.kind == "dp_tau" || res.kind == "visibility_bound";
  bool semilogy = res.kind == "amplification" || res.kind == "grw_vs_master" ||
                  res.kind == "csl_vs_master";
  std::string py;
  py += "#!/usr/bin/env python3\n";
  py += "import matplotlib\n";
  py += "matplotlib.use('Agg')\n";
  py += "import matplotlib.pyplot as plt\n\n";
  py += "path = " + std::string("'") + csv_path + "'\n";
  py += "header, rows = None, []\n";
  py += "with open(path) as f:\n";
  py += "    for line in f:\n";
  py += "        line = line.strip()\n";
  py += "        if not line or line.startswith('#'):\n";
  py += "            continue\n";
  py += "        if header is None:\n";
  py += "            header = line.split(',')\n";
  py += "        else:\n";
  py += "            rows.append([float(v) for v in line.split(',')])\n\n";
  py += "cols = list(zip(*rows))\n";
  py += "fig, ax = plt.subplots(figsize=(6, 4))\n";
  py += "for k in range(1, len(header)):\n";
  py += "    ax.plot(cols[0], cols[k], marker='.', label=header[k])\n";
  if (loglog) py += "ax.set_xscale('log')\nax.set_yscale('log')\n";
  if (semilogy) py += "ax.set_yscale('log')\n";
  py += "ax.set_xlabel(header[0])\n";
  py += "ax.legend()\n";
  py += "ax.set_title('" + res.kind + "')\n";
  py += "fig.tight_layout()\n";
  py += "fig.savefig(path.rsplit('.', 1)[0] + '.png', dpi=150)\n";
  write_file_atomic(script_path, py);
}

}  // namespace collapse

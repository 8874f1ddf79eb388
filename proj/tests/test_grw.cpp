#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/grw.hpp"
#include "collapse/hamiltonian.hpp"
#include "collapse/propagator.hpp"
#include "collapse/rng.hpp"
#include "collapse/wavefunction.hpp"

using namespace collapse;

namespace {

constexpr double r_c = 1e-7;

// marginal of the second coordinate, sum_i |psi(i, j)|^2 dx
std::vector<double> marginal_2(const WaveFunction& s) {
  const std::size_t n = s.grid().n_points;
  std::vector<double> m(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[j] += std::norm(s.at(i, j)) * s.grid().dx();
  return m;
}

}  // namespace

TEST_CASE("localization operators resolve the identity") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  // sum_c L_c(x)^2 dc = 1 at every grid point (centres restricted to the grid)
  std::vector<double> total(g.n_points, 0.0);
  for (std::size_t k = 0; k < g.n_points; ++k) {
    std::vector<double> kern = grw::localization_kernel(g, p, g.x(k));
    for (std::size_t j = 0; j < g.n_points; ++j) total[j] += kern[j] * kern[j] * g.dx();
  }
  for (std::size_t j = 0; j < g.n_points; ++j) CHECK(total[j] == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("localization kernel shape and periodic wrap") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  const double alpha = p.alpha();
  const double amp = std::pow(alpha / constants::pi, 0.25);

  std::vector<double> kern = grw::localization_kernel(g, p, 2.0 * r_c);
  for (std::size_t j = 0; j < g.n_points; j += 7) {
    double u = g.periodic_delta(g.x(j), 2.0 * r_c);
    CHECK(kern[j] == Catch::Approx(amp * std::exp(-0.5 * alpha * u * u)).margin(1e-300));
  }
  // centre on the first grid point: the kernel must wrap symmetrically
  std::vector<double> edge = grw::localization_kernel(g, p, g.x(0));
  for (std::size_t j = 1; j < 40; ++j)
    CHECK(edge[j] == Catch::Approx(edge[g.n_points - j]).epsilon(1e-12));
  CHECK_THROWS_AS(grw::localization_kernel(g, p, g.x_max + r_c), Error);
}

TEST_CASE("collapse probability density is a normalized density") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  WaveFunction s = two_peak_superposition(g, 1e-20, 10.0 * r_c, r_c,
                                          cplx{std::sqrt(0.7), 0.0}, cplx{std::sqrt(0.3), 0.0});
  std::vector<double> dens = grw::collapse_probability_density(s, p);
  double total = 0.0, left = 0.0;
  for (std::size_t k = 0; k < g.n_points; ++k) {
    CHECK(dens[k] >= 0.0);
    total += dens[k] * g.dx();
    if (g.x(k) < g.midpoint()) left += dens[k] * g.dx();
  }
  CHECK(total == Catch::Approx(1.0).epsilon(1e-9));
  // centres split like the Born weights when the peaks are far apart
  CHECK(left == Catch::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("collapse posterior suppresses the distant branch") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  WaveFunction s = two_peak_superposition(g, 1e-20, 10.0 * r_c, r_c, cplx{1.0, 0.0},
                                          cplx{1.0, 0.0});
  grw::apply_collapse(s, p, -5.0 * r_c);  // centre on the left lobe
  CHECK(s.norm() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(probability_in(s, g.midpoint(), g.x_max) < 1e-12);
  CHECK(probability_in(s, g.x_min, g.midpoint()) == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("narrow packets are nearly unchanged by a collapse") {
  Grid1D g = Grid1D::make(-12.8 * r_c, 12.8 * r_c, 2048);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  const double w = r_c / 20.0;
  WaveFunction s = gaussian_packet(g, 1e-20, 0.0, w);
  WaveFunction before = s;
  grw::apply_collapse(s, p, 0.3 * r_c);
  CHECK(fidelity(s, before) > 0.999);
}

TEST_CASE("collapse far from all support leaves an empty posterior") {
  Grid1D g = Grid1D::make(-30.0 * r_c, 30.0 * r_c, 512);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  WaveFunction s = gaussian_packet(g, 1e-20, 0.0, r_c);
  try {
    grw::apply_collapse(s, p, g.x_min);  // 30 r_c away, kernel ~ e^{-450}
    FAIL("expected EmptyPosterior");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_posterior);
  }
}

TEST_CASE("waiting times are exponential") {
  Rng rng(555);
  const double rate = 3.0;
  const int n = 100000;
  double sum = 0.0, tail = 0.0;
  for (int i = 0; i < n; ++i) {
    double t = grw::sample_waiting_time(rate, rng);
    sum += t;
    if (t > 1.0 / rate) tail += 1.0;
  }
  CHECK(sum / n == Catch::Approx(1.0 / rate).epsilon(0.01));
  CHECK(tail / n == Catch::Approx(std::exp(-1.0)).epsilon(0.02));
  CHECK(grw::sample_waiting_time(0.0, rng) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(grw::sample_waiting_time(-1.0, rng), Error);
}

TEST_CASE("collapse centres sample the Born weights") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  WaveFunction s = two_peak_superposition(g, 1e-20, 10.0 * r_c, r_c,
                                          cplx{std::sqrt(0.7), 0.0}, cplx{std::sqrt(0.3), 0.0});
  Rng rng(808);
  const int n = 10000;
  int left = 0;
  for (int i = 0; i < n; ++i)
    if (grw::sample_collapse_center(s, p, 0, rng) < g.midpoint()) ++left;
  // 3 sigma of a Bernoulli(0.7) mean over 1e4 draws is 0.0137
  CHECK(static_cast<double>(left) / n == Catch::Approx(0.7).margin(0.0138));
}

TEST_CASE("event counts follow the per-particle Poisson clock") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(200.0, r_c);
  WaveFunction s = gaussian_packet(g, 1e-20, 0.0, r_c);
  Hamiltonian free = Hamiltonian::free_particle();
  grw::TrajectoryOptions opt;
  opt.t_final = 0.05;
  opt.dt = 0.05;
  opt.collapse_rate = p.lambda;

  const int n_traj = 1000;
  double events = 0.0;
  for (int i = 0; i < n_traj; ++i) {
    Rng rng(stream_seed(99, static_cast<std::uint64_t>(i)));
    grw::TrajectoryResult r = grw::run_trajectory(s, free, p, opt, rng);
    events += static_cast<double>(r.events.size());
    double prev = 0.0;
    for (const auto& ev : r.events) {
      CHECK(ev.time >= prev);
      CHECK(ev.particle == 0);
      prev = ev.time;
    }
  }
  // mean lambda t = 10, 3.5 sigma of the sample mean is 0.35
  CHECK(events / n_traj == Catch::Approx(10.0).margin(0.35));
}

TEST_CASE("two particles fire independent clocks") {
  Grid1D g = Grid1D::make(-7.5 * r_c, 7.5 * r_c, 64);
  CollapseParams p = CollapseParams::make(100.0, r_c);
  WaveFunction one = gaussian_packet(g, 1e-20, 0.0, r_c);
  WaveFunction s = product_state(one, one);
  Hamiltonian free = Hamiltonian::free_particle();
  grw::TrajectoryOptions opt;
  opt.t_final = 0.05;
  opt.dt = 0.05;
  opt.collapse_rate = p.lambda;

  const int n_traj = 300;
  double events = 0.0, on_first = 0.0;
  for (int i = 0; i < n_traj; ++i) {
    Rng rng(stream_seed(7, static_cast<std::uint64_t>(i)));
    grw::TrajectoryResult r = grw::run_trajectory(s, free, p, opt, rng);
    events += static_cast<double>(r.events.size());
    for (const auto& ev : r.events)
      if (ev.particle == 0) on_first += 1.0;
  }
  // total rate 2 lambda: mean count 10; particle labels split evenly
  CHECK(events / n_traj == Catch::Approx(10.0).margin(0.65));
  CHECK(on_first / events == Catch::Approx(0.5).margin(0.03));
}

TEST_CASE("a jump on one particle leaves the other marginal untouched") {
  Grid1D g = Grid1D::make(-7.5 * r_c, 7.5 * r_c, 64);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  WaveFunction a = gaussian_packet(g, 1e-20, -2.0 * r_c, r_c);
  WaveFunction b = gaussian_packet(g, 1e-20, 2.0 * r_c, r_c);
  WaveFunction s = product_state(a, b);
  std::vector<double> before = marginal_2(s);
  grw::apply_collapse(s, p, -2.5 * r_c, 0);
  std::vector<double> after = marginal_2(s);
  for (std::size_t j = 0; j < before.size(); ++j)
    CHECK(after[j] == Catch::Approx(before[j]).margin(1e-12));
}

TEST_CASE("zero collapse rate reduces to the unitary flow") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(0.0, r_c);
  WaveFunction s = gaussian_packet(g, 1e-24, 0.0, r_c);
  Hamiltonian free = Hamiltonian::free_particle();
  grw::TrajectoryOptions opt;
  opt.t_final = 1e-4;
  opt.dt = 1e-5;
  opt.collapse_rate = 0.0;
  Rng rng(4);
  grw::TrajectoryResult r = grw::run_trajectory(s, free, p, opt, rng);
  CHECK(r.events.empty());
  WaveFunction direct = s;
  evolve(direct, free, opt.t_final, opt.dt);
  double err = 0.0;
  for (std::size_t j = 0; j < g.n_points; ++j)
    err = std::max(err, std::abs(r.final_state.at(j) - direct.at(j)));
  CHECK(err < 1e-14);
}

TEST_CASE("sample records cover requested times including the endpoint") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(50.0, r_c);
  WaveFunction s = two_peak_superposition(g, 1e-20, 8.0 * r_c, r_c, cplx{1.0, 0.0},
                                          cplx{1.0, 0.0});
  Hamiltonian free = Hamiltonian::free_particle();
  grw::TrajectoryOptions opt;
  opt.t_final = 0.05;
  opt.dt = 0.05;
  opt.collapse_rate = p.lambda;
  opt.sample_times = {0.0, 0.01, 0.025, 0.05};
  Rng rng(31);
  grw::TrajectoryResult r = grw::run_trajectory(s, free, p, opt, rng);
  REQUIRE(r.samples.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(r.samples[k].time == opt.sample_times[k]);
    CHECK(r.samples[k].state.norm() == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(r.samples[k].obs.norm == Catch::Approx(1.0).epsilon(1e-9));
  }
  CHECK(fidelity(r.samples[0].state, s) == Catch::Approx(1.0).epsilon(1e-12));
  // invalid sampling grids are rejected
  grw::TrajectoryOptions bad = opt;
  bad.sample_times = {0.02, 0.01};
  CHECK_THROWS_AS(grw::run_trajectory(s, free, p, bad, rng), Error);
  bad.sample_times = {0.06};
  CHECK_THROWS_AS(grw::run_trajectory(s, free, p, bad, rng), Error);
}

TEST_CASE("trajectories are reproducible from their stream seed") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 256);
  CollapseParams p = CollapseParams::make(100.0, r_c);
  WaveFunction s = two_peak_superposition(g, 1e-20, 10.0 * r_c, r_c, cplx{1.0, 0.0},
                                          cplx{1.0, 0.0});
  Hamiltonian free = Hamiltonian::free_particle();
  grw::TrajectoryOptions opt;
  opt.t_final = 0.03;
  opt.dt = 0.03;
  opt.collapse_rate = p.lambda;

  Rng r1(stream_seed(2024, 5)), r2(stream_seed(2024, 5)), r3(stream_seed(2024, 6));
  grw::TrajectoryResult a = grw::run_trajectory(s, free, p, opt, r1);
  grw::TrajectoryResult b = grw::run_trajectory(s, free, p, opt, r2);
  grw::TrajectoryResult c = grw::run_trajectory(s, free, p, opt, r3);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].time == b.events[i].time);
    CHECK(a.events[i].center == b.events[i].center);
  }
  double err = 0.0;
  for (std::size_t j = 0; j < g.n_points; ++j)
    err = std::max(err, std::abs(a.final_state.at(j) - b.final_state.at(j)));
  CHECK(err == 0.0);
  bool differs = a.events.size() != c.events.size();
  for (std::size_t i = 0; !differs && i < a.events.size(); ++i)
    differs = a.events[i].time != c.events[i].time;
  CHECK(differs);
}

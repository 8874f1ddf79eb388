#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/density_matrix.hpp"
#include "collapse/grw.hpp"
#include "collapse/hamiltonian.hpp"
#include "collapse/master.hpp"
#include "collapse/propagator.hpp"
#include "collapse/rng.hpp"
#include "collapse/wavefunction.hpp"

using namespace collapse;

namespace {
constexpr double r_c = 1e-7;
}

TEST_CASE("decay kernel values") {
  CollapseParams p = CollapseParams::make(2.0, r_c);
  CHECK(master::decay_kernel(0.0, p) == 0.0);  // diagonal is exactly untouched
  // 1 - e^{-1/4} at separation r_c
  CHECK(master::decay_kernel(r_c, p) ==
        Catch::Approx(2.0 * 0.22119921692859512).epsilon(1e-15));
  CHECK(master::decay_kernel(20.0 * r_c, p) == Catch::Approx(2.0).epsilon(1e-15));
  double prev = -1.0;
  for (double d = 0.0; d <= 5.0 * r_c; d += 0.25 * r_c) {
    double g = master::decay_kernel(d, p);
    CHECK(g > prev);
    prev = g;
  }
  CHECK_THROWS_AS(master::decay_kernel(-1e-9, p), Error);
  // quadratic small-separation behaviour: Gamma(d) ~ lambda alpha d^2 / 4
  double d = 1e-3 * r_c;
  CHECK(master::decay_kernel(d, p) ==
        Catch::Approx(2.0 * 0.25 * p.alpha() * d * d).epsilon(1e-6));
}

TEST_CASE("zero collapse rate keeps the master equation unitary") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 128);
  const double m = 1e-26, omega = 2e5;
  const double w_g = std::sqrt(constants::hbar / (m * omega));
  WaveFunction psi = gaussian_packet(g, m, 3.0 * r_c, w_g);
  CollapseParams p = CollapseParams::make(0.0, r_c);
  Hamiltonian h = Hamiltonian::harmonic(omega);
  const double period = 2.0 * constants::pi / omega;

  DensityMatrix rho = DensityMatrix::from_pure(psi);
  master::evolve_density_matrix(rho, h, p, period / 4.0, period / 100.0);
  CHECK(rho.trace() == Catch::Approx(1.0).epsilon(1e-10));
  CHECK(rho.purity() == Catch::Approx(1.0).epsilon(1e-8));

  WaveFunction direct = psi;
  evolve(direct, h, period / 4.0, period / 100.0);
  CHECK(trace_distance(rho, DensityMatrix::from_pure(direct)) < 1e-8);
}

TEST_CASE("off-diagonal elements decay at the kernel rate") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 128);
  const double m = 1e-10;  // effectively frozen kinetics
  WaveFunction psi = two_peak_superposition(g, m, 10.0 * r_c, r_c, cplx{1.0, 0.0},
                                            cplx{1.0, 0.0});
  CollapseParams p = CollapseParams::make(100.0, r_c);
  Hamiltonian free = Hamiltonian::free_particle();

  DensityMatrix rho = DensityMatrix::from_pure(psi);
  std::size_t i = g.nearest_index(-5.0 * r_c), j = g.nearest_index(5.0 * r_c);
  double before = std::abs(rho.at(i, j));
  REQUIRE(before > 1e-3);

  const double t = 0.02;
  master::evolve_density_matrix(rho, free, p, t, 2e-3);
  double sep = static_cast<double>(g.ring_distance(i, j)) * g.dx();
  double expected = before * std::exp(-master::decay_kernel(sep, p) * t);
  CHECK(std::abs(rho.at(i, j)) == Catch::Approx(expected).epsilon(1e-4));

  CHECK(rho.trace() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(rho.hermiticity_error() < 1e-8);
  CHECK(min_eigenvalue(rho) > -1e-10);
  // diagonal stays in place while coherence dies
  CHECK(std::abs(rho.at(i, i)) == Catch::Approx(before).epsilon(1e-6));
}

TEST_CASE("exponential fit recovers synthetic rates") {
  std::vector<double> times = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> mags(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) mags[k] = 0.8 * std::exp(-2.5 * times[k]);
  master::DecayFit f = master::fit_exponential(times, mags);
  CHECK(f.rate == Catch::Approx(2.5).epsilon(1e-12));
  CHECK(f.magnitude == Catch::Approx(0.8).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-12);

  std::vector<double> up = {0.1, 0.2, 0.3};
  std::vector<double> grow = {1.0, 2.0, 4.0};
  CHECK_THROWS_AS(master::fit_exponential(up, grow), Error);
  std::vector<double> zero = {1.0, 0.0, 0.5};
  CHECK_THROWS_AS(master::fit_exponential(up, zero), Error);
  std::vector<double> two = {0.1, 0.2};
  std::vector<double> twov = {1.0, 0.5};
  CHECK_THROWS_AS(master::fit_exponential(two, twov), Error);
}

TEST_CASE("offdiag decay fit on a density matrix record") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 128);
  WaveFunction psi = two_peak_superposition(g, 1e-20, 10.0 * r_c, r_c, cplx{1.0, 0.0},
                                            cplx{1.0, 0.0});
  DensityMatrix rho0 = DensityMatrix::from_pure(psi);
  std::size_t i = g.nearest_index(-5.0 * r_c), j = g.nearest_index(5.0 * r_c);

  std::vector<double> times = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<DensityMatrix> rhos;
  for (double t : times) {
    DensityMatrix r = rho0;
    r.at(i, j) *= std::exp(-3.0 * t);
    rhos.push_back(r);
  }
  master::DecayFit f = master::offdiag_decay_fit(times, rhos, -5.0 * r_c, 5.0 * r_c);
  CHECK(f.rate == Catch::Approx(3.0).epsilon(1e-6));

  std::vector<double> four(times.begin(), times.begin() + 4);
  std::vector<DensityMatrix> four_r(rhos.begin(), rhos.begin() + 4);
  CHECK_THROWS_AS(master::offdiag_decay_fit(four, four_r, -5.0 * r_c, 5.0 * r_c), Error);
}

TEST_CASE("master equation validates its input") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 128);
  WaveFunction psi = gaussian_packet(g, 1e-20, 0.0, r_c);
  CollapseParams p = CollapseParams::make(1.0, r_c);
  Hamiltonian free = Hamiltonian::free_particle();

  DensityMatrix bad_trace = DensityMatrix::from_pure(psi);
  bad_trace.scale(0.5);
  CHECK_THROWS_AS(master::evolve_density_matrix(bad_trace, free, p, 1e-3, 1e-4), Error);

  DensityMatrix bad_herm = DensityMatrix::from_pure(psi);
  bad_herm.at(3, 60) += cplx{0.1, 0.1};
  CHECK_THROWS_AS(master::evolve_density_matrix(bad_herm, free, p, 1e-3, 1e-4), Error);

  DensityMatrix rho = DensityMatrix::from_pure(psi);
  CHECK_THROWS_AS(master::evolve_density_matrix(rho, free, p, 1e-3, 0.0), Error);
  CHECK_THROWS_AS(master::evolve_density_matrix(rho, free, p, -1.0, 1e-4), Error);
  Hamiltonian trap = Hamiltonian::harmonic(1e5);
  try {
    master::evolve_density_matrix(rho, trap, p, 1e-3, 1.0);
    FAIL("expected StepTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::step_too_large);
  }
}

TEST_CASE("jump ensemble converges to the master equation") {
  Grid1D g = Grid1D::make(-15.0 * r_c, 15.0 * r_c, 128);
  const double m = 1e-20;
  WaveFunction psi = two_peak_superposition(g, m, 6.0 * r_c, r_c, cplx{1.0, 0.0},
                                            cplx{1.0, 0.0});
  CollapseParams p = CollapseParams::make(50.0, r_c);
  Hamiltonian free = Hamiltonian::free_particle();

  std::vector<double> sample_times = {0.01, 0.02};
  grw::TrajectoryOptions opt;
  opt.t_final = sample_times.back();
  opt.dt = sample_times.back();
  opt.collapse_rate = p.lambda;
  opt.sample_times = sample_times;

  const int n_traj = 500;
  std::vector<DensityMatrix> ens(sample_times.size(), DensityMatrix::zero(g, m));
  for (int i = 0; i < n_traj; ++i) {
    Rng rng(stream_seed(11, static_cast<std::uint64_t>(i)));
    grw::TrajectoryResult r = grw::run_trajectory(psi, free, p, opt, rng);
    for (std::size_t k = 0; k < sample_times.size(); ++k)
      ens[k].add_pure(r.samples[k].state, 1.0 / n_traj);
  }

  DensityMatrix rho = DensityMatrix::from_pure(psi);
  double t_prev = 0.0;
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    master::evolve_density_matrix(rho, free, p, sample_times[k] - t_prev, 2e-3);
    t_prev = sample_times[k];
    CHECK(trace_distance(ens[k], rho) < 0.12);
  }
}

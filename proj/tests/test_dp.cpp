#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/dp.hpp"

using namespace collapse;

namespace {

const double four_pi_g = 4.0 * constants::pi * constants::gravitation;

// Both-orders pair sums per unit G for closed-form geometries.  The
// gravitational self-integral of a uniform sphere is (6/5) M^2 / R and of a
// Gaussian M^2 / (sigma sqrt(pi)); two Gaussians of common width interact as
// M m erf(d / 2 sigma) / d (times two for the two orders).
double gauss_pair(double ma, double mb, double d, double sigma) {
  if (d == 0.0) return 2.0 * ma * mb / (sigma * std::sqrt(constants::pi));
  return 2.0 * ma * mb * std::erf(d / (2.0 * sigma)) / d;
}

double two_sphere_delta_e(double mass, double radius, double d) {
  // valid for d >= 2R, where the spheres interact as points
  return four_pi_g * 2.0 * mass * mass * (6.0 / (5.0 * radius) - 1.0 / d);
}

double two_gauss_delta_e(double mass, double sigma, double d) {
  return four_pi_g * (2.0 * gauss_pair(mass, mass, 0.0, sigma) / 2.0 -
                      gauss_pair(mass, mass, d, sigma));
}

}  // namespace

TEST_CASE("separated spheres match the closed form") {
  const double mass = 1e-14, radius = 1e-7, d = 1e-6;
  dp::MassDistribution a = dp::MassDistribution::uniform_sphere(mass, radius);
  dp::MassDistribution b =
      dp::MassDistribution::uniform_sphere(mass, radius, {d, 0.0, 0.0});
  double e = dp::delta_e(a, b);
  CHECK(e == Catch::Approx(two_sphere_delta_e(mass, radius, d)).epsilon(1e-8));
  CHECK(e == Catch::Approx(1.8451780026111833e-30).epsilon(1e-7));
  CHECK(dp::collapse_time(e) == Catch::Approx(5.71528500506528e-05).epsilon(1e-7));

  // displacement along a different axis gives the identical answer
  dp::MassDistribution c =
      dp::MassDistribution::uniform_sphere(mass, radius, {0.0, 0.0, -d});
  CHECK(dp::delta_e(a, c) == e);
}

TEST_CASE("displaced gaussians match the closed form") {
  const double mass = 1e-14, sigma = 1e-7, d = 5e-7;
  dp::MassDistribution a = dp::MassDistribution::gaussian(mass, sigma);
  dp::MassDistribution b = dp::MassDistribution::gaussian(mass, sigma, {0.0, d, 0.0});
  double e = dp::delta_e(a, b);
  CHECK(e == Catch::Approx(two_gauss_delta_e(mass, sigma, d)).epsilon(1e-8));
  CHECK(e == Catch::Approx(6.110407164768995e-31).epsilon(1e-7));

  // small displacements: delta_e ~ d^2, checked via the 2:1 displacement ratio
  double e1 = dp::delta_e(a, dp::MassDistribution::gaussian(mass, sigma, {1e-3 * sigma, 0, 0}));
  double e2 = dp::delta_e(a, dp::MassDistribution::gaussian(mass, sigma, {2e-3 * sigma, 0, 0}));
  CHECK(e2 / e1 == Catch::Approx(4.0).epsilon(0.01));
}

TEST_CASE("identical distributions give exactly zero") {
  dp::MassDistribution a = dp::MassDistribution::uniform_sphere(1e-14, 1e-7, {3e-7, 1e-7, 0.0});
  CHECK(dp::delta_e(a, a) == 0.0);
  CHECK(dp::collapse_time(0.0) == std::numeric_limits<double>::infinity());

  // same shape at different centres but equal pair geometry also cancels
  dp::MassDistribution b = dp::MassDistribution::uniform_sphere(1e-14, 1e-7, {0.0, 0.0, 0.0});
  dp::MassDistribution c = dp::MassDistribution::uniform_sphere(1e-14, 1e-7, {5e-7, 0.0, 0.0});
  CHECK(dp::delta_e(b, c) == dp::delta_e(c, b));  // exact argument symmetry
}

TEST_CASE("scaling laws") {
  const double mass = 1e-14, radius = 1e-7, d = 5e-7;
  auto make = [&](double m, double scale) {
    return std::pair{dp::MassDistribution::uniform_sphere(m, radius * scale),
                     dp::MassDistribution::uniform_sphere(m, radius * scale,
                                                          {d * scale, 0.0, 0.0})};
  };
  auto [a1, b1] = make(mass, 1.0);
  double e1 = dp::delta_e(a1, b1);

  auto [a2, b2] = make(3.0 * mass, 1.0);
  CHECK(dp::delta_e(a2, b2) == Catch::Approx(9.0 * e1).epsilon(1e-12));

  auto [a3, b3] = make(mass, 7.0);
  CHECK(dp::delta_e(a3, b3) == Catch::Approx(e1 / 7.0).epsilon(1e-9));
}

TEST_CASE("energy grows with separation toward the self-energy sum") {
  const double mass = 1e-14, radius = 1e-7;
  dp::MassDistribution a = dp::MassDistribution::uniform_sphere(mass, radius);
  double prev = 0.0;
  for (double d : {0.5 * radius, radius, 2.0 * radius, 4.0 * radius, 20.0 * radius}) {
    double e = dp::delta_e(a, dp::MassDistribution::uniform_sphere(mass, radius, {d, 0, 0}));
    CHECK(e > prev);
    prev = e;
  }
  double far = dp::delta_e(
      a, dp::MassDistribution::uniform_sphere(mass, radius, {1e4 * radius, 0, 0}));
  CHECK(far == Catch::Approx(four_pi_g * 2.0 * mass * mass * 6.0 / (5.0 * radius))
                   .epsilon(2e-4));

  // continuity across the touching point d = 2R
  double below = dp::delta_e(
      a, dp::MassDistribution::uniform_sphere(mass, radius, {2.0 * radius * (1 - 1e-5), 0, 0}));
  double above = dp::delta_e(
      a, dp::MassDistribution::uniform_sphere(mass, radius, {2.0 * radius * (1 + 1e-5), 0, 0}));
  CHECK(below == Catch::Approx(above).epsilon(1e-3));
}

TEST_CASE("mixed sphere and gaussian pair") {
  // At separations far beyond the Gaussian width the sphere samples a
  // harmonic region of the Gaussian potential, so the monopole term is exact.
  const double big = 2e-14, small = 5e-15, radius = 1e-7, sigma = 1e-7, d = 2e-6;
  dp::MassDistribution a = dp::MassDistribution::uniform_sphere(big, radius);
  dp::MassDistribution b = dp::MassDistribution::gaussian(small, sigma, {d, 0.0, 0.0});
  double expected = four_pi_g * (6.0 / 5.0 * big * big / radius +
                                 small * small / (sigma * std::sqrt(constants::pi)) -
                                 gauss_pair(big, small, d, sigma));
  CHECK(dp::delta_e(a, b) == Catch::Approx(expected).epsilon(1e-8));
}

TEST_CASE("point sets aggregate like explicit gaussians") {
  const double m1 = 3e-15, m2 = 5e-15, s = 2e-8;
  std::vector<double> masses = {m1, m2};
  std::vector<std::array<double, 3>> pa = {{0.0, 0.0, 0.0}, {1e-7, 0.0, 0.0}};
  std::vector<std::array<double, 3>> pb = {{2e-7, 0.0, 0.0}, {3.5e-7, 0.0, 0.0}};
  dp::MassDistribution a = dp::MassDistribution::point_set(masses, pa, s);
  dp::MassDistribution b = dp::MassDistribution::point_set(masses, pb, s);

  auto dist = [](const std::array<double, 3>& x, const std::array<double, 3>& y) {
    return std::hypot(x[0] - y[0], x[1] - y[1], x[2] - y[2]);
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      acc += 0.5 * gauss_pair(masses[i], masses[j], dist(pa[i], pa[j]), s);
      acc += 0.5 * gauss_pair(masses[i], masses[j], dist(pb[i], pb[j]), s);
      acc -= gauss_pair(masses[i], masses[j], dist(pa[i], pb[j]), s);
    }
  CHECK(dp::delta_e(a, b) == Catch::Approx(four_pi_g * acc).epsilon(1e-8));

  // a single smeared point is the same distribution as a gaussian component
  dp::MassDistribution p1 = dp::MassDistribution::point_set({m1}, {pa[0]}, s);
  dp::MassDistribution g1 = dp::MassDistribution::gaussian(m1, s, pa[0]);
  dp::MassDistribution far = dp::MassDistribution::gaussian(m2, s, {9e-7, 0, 0});
  CHECK(dp::delta_e(p1, far) == dp::delta_e(g1, far));
}

TEST_CASE("quadrature failure and input validation") {
  dp::MassDistribution a = dp::MassDistribution::uniform_sphere(1e-14, 1e-7);
  dp::MassDistribution b = dp::MassDistribution::uniform_sphere(1e-14, 1e-7, {7e-8, 0, 0});
  dp::QuadratureOptions starved;
  starved.max_depth = 0;
  try {
    dp::delta_e(a, b, starved);
    FAIL("expected QuadratureNotConverged");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::quadrature_not_converged);
  }

  CHECK_THROWS_AS(dp::MassDistribution::uniform_sphere(0.0, 1e-7), Error);
  CHECK_THROWS_AS(dp::MassDistribution::uniform_sphere(1e-14, -1e-7), Error);
  CHECK_THROWS_AS(dp::MassDistribution::gaussian(-1e-14, 1e-7), Error);
  CHECK_THROWS_AS(dp::MassDistribution::point_set({}, {}, 1e-8), Error);
  CHECK_THROWS_AS(dp::MassDistribution::point_set({1e-15}, {}, 1e-8), Error);
  CHECK_THROWS_AS(dp::MassDistribution::point_set({1e-15}, {{0, 0, 0}}, 0.0), Error);
  CHECK_THROWS_AS(dp::collapse_time(-1.0), Error);
}

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "collapse/errors.hpp"
#include "collapse/grid.hpp"
#include "collapse/wavefunction.hpp"

namespace collapse {

// Dense single-particle position-basis density matrix,
// el[i * n + j] = rho(x_i, x_j).  Trace convention: tr rho = sum_i rho(x_i, x_i) dx.
// Dense storage keeps this usable up to n_points = 512 or so; that is the
// intended regime (the trajectory ensembles use the same grids).
class DensityMatrix {
 public:
  static DensityMatrix zero(const Grid1D& grid, double mass) {
    DensityMatrix d;
    d.grid_ = grid;
    d.mass_ = mass;
    d.el_.assign(grid.n_points * grid.n_points, cplx{0.0, 0.0});
    return d;
  }

  static DensityMatrix from_pure(const WaveFunction& s) {
    if (s.n_particles() != 1)
      fail(Errc::invalid_argument, "density_matrix: only single-particle states");
    DensityMatrix d = zero(s.grid(), s.mass(0));
    d.add_pure(s, 1.0);
    return d;
  }

  // Accumulate weight * |psi><psi| (ensemble averaging).
  void add_pure(const WaveFunction& s, double weight) {
    if (!(s.grid() == grid_)) fail(Errc::invalid_argument, "density_matrix: grid mismatch");
    std::size_t n = grid_.n_points;
    for (std::size_t i = 0; i < n; ++i) {
      cplx a = weight * s.at(i);
      for (std::size_t j = 0; j < n; ++j) el_[i * n + j] += a * std::conj(s.at(j));
    }
  }

  const Grid1D& grid() const { return grid_; }
  double mass() const { return mass_; }
  std::size_t n() const { return grid_.n_points; }
  std::vector<cplx>& elements() { return el_; }
  const std::vector<cplx>& elements() const { return el_; }
  cplx& at(std::size_t i, std::size_t j) { return el_[i * grid_.n_points + j]; }
  cplx at(std::size_t i, std::size_t j) const { return el_[i * grid_.n_points + j]; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n(); ++i) t += el_[i * n() + i].real();
    return t * grid_.dx();
  }

  double purity() const {  // tr rho^2
    double s = 0.0;
    for (const cplx& e : el_) s += std::norm(e);
    return s * grid_.dx() * grid_.dx();
  }

  double hermiticity_error() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = i; j < n(); ++j)
        m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
    return m;
  }

  void scale(double f) {
    for (cplx& e : el_) e *= f;
  }

 private:
  Grid1D grid_;
  double mass_ = 0.0;
  std::vector<cplx> el_;
};

namespace detail {

inline Eigen::MatrixXcd to_eigen(const DensityMatrix& d) {
  std::size_t n = d.n();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d.at(i, j);
  return m;
}

}  // namespace detail

// Eigenvalues of rho interpreted as an operator (matrix elements scaled by dx),
// ascending.  Hermitized before decomposition.
inline std::vector<double> spectrum(const DensityMatrix& d) {
  Eigen::MatrixXcd m = detail::to_eigen(d) * d.grid().dx();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + d.n());
  return out;
}

inline double min_eigenvalue(const DensityMatrix& d) { return spectrum(d).front(); }

// Trace distance (1/2) ||rho_a - rho_b||_1.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.grid() == b.grid())) fail(Errc::invalid_argument, "trace_distance: grid mismatch");
  Eigen::MatrixXcd m = (detail::to_eigen(a) - detail::to_eigen(b)) * a.grid().dx();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace collapse

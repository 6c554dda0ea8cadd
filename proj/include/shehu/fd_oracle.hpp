#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "shehu/errors.hpp"
#include "shehu/grid.hpp"

namespace shehu {

// Finite-difference reference solvers on the unit square with homogeneous
// Dirichlet walls. Only interior nodes are stored; output fields hold the
// time levels 0..nt.

using InitialFn = std::function<double(double, double)>;

struct FDGrid {
  int nx = 32;
  int ny = 32;
  int nt = 64;
  double dt = 1.0 / 256.0;

  double dx() const { return 1.0 / (nx + 1); }
  double dy() const { return 1.0 / (ny + 1); }

  void validate() const {
    if (nx < 2 || ny < 2 || nt < 2) throw DomainError("finite-difference grid needs at least 2 nodes per axis");
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
  }

  Grid3Spec field_spec() const {
    Grid3Spec g;
    g.origin = {dx(), dy(), 0.0};
    g.step = {dx(), dy(), dt};
    g.count = {nx, ny, nt + 1};
    return g;
  }

  // Largest stable step of the explicit wave scheme.
  double explicit_limit() const { return 1.0 / std::sqrt(1.0 / (dx() * dx()) + 1.0 / (dy() * dy())); }
};

namespace detail {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// -Laplacian on the interior nodes, index i * ny + j.
inline SpMat neg_laplacian(const FDGrid& g) {
  const double ax = 1.0 / (g.dx() * g.dx()), ay = 1.0 / (g.dy() * g.dy());
  std::vector<Eigen::Triplet<double>> tr;
  tr.reserve(static_cast<std::size_t>(5 * g.nx * g.ny));
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const int r = i * g.ny + j;
      tr.emplace_back(r, r, 2 * ax + 2 * ay);
      if (i > 0) tr.emplace_back(r, r - g.ny, -ax);
      if (i + 1 < g.nx) tr.emplace_back(r, r + g.ny, -ax);
      if (j > 0) tr.emplace_back(r, r - 1, -ay);
      if (j + 1 < g.ny) tr.emplace_back(r, r + 1, -ay);
    }
  SpMat L(g.nx * g.ny, g.nx * g.ny);
  L.setFromTriplets(tr.begin(), tr.end());
  return L;
}

inline Vec sample(const InitialFn& f, const FDGrid& g) {
  Vec v(g.nx * g.ny);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) v[i * g.ny + j] = f((i + 1) * g.dx(), (j + 1) * g.dy());
  return v;
}

inline Grid3Field pack(const std::vector<Vec>& levels, const FDGrid& g) {
  Grid3Field out(g.field_spec());
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) out.at(i, j, k) = levels[k][i * g.ny + j];
  return out;
}

inline Vec level(const Grid3Field& f, int k) {
  const auto& c = f.spec.count;
  Vec v(c[0] * c[1]);
  for (int i = 0; i < c[0]; ++i)
    for (int j = 0; j < c[1]; ++j) v[i * c[1] + j] = f.at(i, j, k);
  return v;
}

}  // namespace detail

struct CgSettings {
  double tol = 1e-10;
  int max_iterations = 0;  // 0: ten times the unknown count
};

// L1 weights b_j = (j+1)^{1-gamma} - j^{1-gamma}.
inline std::vector<double> l1_weights(double gamma, int n) {
  std::vector<double> b(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) b[j] = std::pow(j + 1.0, 1.0 - gamma) - std::pow(j, 1.0 - gamma);
  return b;
}

// D_t^gamma f = (f_xx + f_yy) / pi^2, L1 in time, implicit five-point Laplacian.
// At gamma = 1 this is backward Euler.
inline Grid3Field l1_heat_solve(double gamma, const InitialFn& ic, const FDGrid& g,
                                const CgSettings& solver = {}) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  g.validate();
  const double mu = std::pow(g.dt, -gamma) / std::tgamma(2.0 - gamma);
  const auto b = l1_weights(gamma, g.nt);
  const detail::SpMat L = detail::neg_laplacian(g);
  detail::SpMat A = L / (kPi * kPi);
  for (int r = 0; r < A.rows(); ++r) A.coeffRef(r, r) += mu;
  Eigen::ConjugateGradient<detail::SpMat, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(solver.tol);
  cg.setMaxIterations(solver.max_iterations > 0 ? solver.max_iterations : 10 * static_cast<int>(A.rows()));
  cg.compute(A);
  if (cg.info() != Eigen::Success) throw SolveError("L1 system factorization failed");

  std::vector<detail::Vec> u;
  u.reserve(static_cast<std::size_t>(g.nt + 1));
  u.push_back(detail::sample(ic, g));
  for (int n = 1; n <= g.nt; ++n) {
    detail::Vec rhs = u[n - 1];
    for (int j = 1; j < n; ++j) rhs -= b[j] * (u[n - j] - u[n - j - 1]);
    rhs *= mu;
    detail::Vec next = cg.solveWithGuess(rhs, u[n - 1]);
    if (cg.info() != Eigen::Success)
      throw SolveError("CG did not reach " + std::to_string(solver.tol) + " at step " + std::to_string(n) +
                       " (residual " + std::to_string(cg.error()) + ")");
    u.push_back(std::move(next));
  }
  return detail::pack(u, g);
}

// f_tt + 2 alpha f_t + beta^2 f = f_xx + f_yy, explicit centred differences.
inline Grid3Field classical_telegraph_solve(double alpha, double beta, const InitialFn& ic,
                                            const InitialFn& ic_velocity, const FDGrid& g) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("alpha and beta must be non-negative");
  g.validate();
  if (g.dt > g.explicit_limit() * (1.0 + 1e-12))
    throw StabilityError("dt = " + std::to_string(g.dt) + " exceeds the explicit limit " +
                         std::to_string(g.explicit_limit()));
  const detail::SpMat L = detail::neg_laplacian(g);
  const double dt = g.dt, b2 = beta * beta, ad = alpha * dt;
  std::vector<detail::Vec> u;
  u.reserve(static_cast<std::size_t>(g.nt + 1));
  u.push_back(detail::sample(ic, g));
  const detail::Vec v0 = detail::sample(ic_velocity, g);
  {
    const detail::Vec acc = -(L * u[0]) - b2 * u[0] - 2.0 * alpha * v0;
    u.push_back(u[0] + dt * v0 + 0.5 * dt * dt * acc);
  }
  for (int n = 1; n < g.nt; ++n) {
    const detail::Vec force = -(L * u[n]) - b2 * u[n];
    u.push_back((2.0 * u[n] - (1.0 - ad) * u[n - 1] + dt * dt * force) / (1.0 + ad));
  }
  return detail::pack(u, g);
}

// Staggered energy between levels k and k+1 of a telegraph field:
//   1/2 |(u1 - u0)/dt|^2 + 1/2 <u1, -Lap u0> + beta^2/2 <u1, u0>, times dx dy.
// Conserved by the scheme when alpha = 0 and non-increasing when alpha > 0.
inline double telegraph_energy(const Grid3Field& f, int k, double beta) {
  if (k < 0 || k + 1 >= f.spec.count[2]) throw DomainError("energy needs levels k and k+1");
  FDGrid g;
  g.nx = f.spec.count[0];
  g.ny = f.spec.count[1];
  const detail::Vec u0 = detail::level(f, k), u1 = detail::level(f, k + 1);
  const double dt = f.spec.step[2];
  const double kinetic = 0.5 * ((u1 - u0) / dt).squaredNorm();
  const double potential = 0.5 * u1.dot(detail::neg_laplacian(g) * u0) + 0.5 * beta * beta * u1.dot(u0);
  return (kinetic + potential) * g.dx() * g.dy();
}

}  // namespace shehu

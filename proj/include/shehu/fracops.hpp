#pragma once

#include <array>
#include <cmath>
#include <string>

#include "shehu/errors.hpp"
#include "shehu/field.hpp"
#include "shehu/quadrature.hpp"
#include "shehu/specfun.hpp"
#include "shehu/types.hpp"

namespace shehu {

// A fractional order gamma with its integer ceiling n, n - 1 < gamma <= n.
struct FracOrder {
  double value = 1.0;
  int ceil = 1;

  static FracOrder of(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("fractional order must be positive");
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-14 * std::max(1.0, v)) return {r, static_cast<int>(r)};
    return {v, static_cast<int>(std::ceil(v))};
  }

  bool is_integer() const { return value == static_cast<double>(ceil); }
};

inline QuadratureConfig fracops_config() {
  QuadratureConfig c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-15;
  c.max_subdivisions = 3000;
  return c;
}

namespace detail {

inline Point3 with_coord(Point3 p, Axis a, double v) {
  p[index(a)] = v;
  return p;
}

// Central-difference step for an n-th derivative at p.
inline double fd_step(int n, double p) {
  return std::max(1.0, std::abs(p)) * std::pow(1e-5, 2.0 / (n + 1));
}

}  // namespace detail

// Riemann-Liouville integral (1/Gamma(g)) int_0^p (p - tau)^{g-1} f(tau) dtau.
// For g < 1 the half next to the weakly singular kernel end is mapped by
// tau = p - w^{1/g}; the half next to the origin keeps tau so integrable
// singularities of f at 0 are resolved by graded panels.
inline double rl_integral_1d(const ScalarFn& f, FracOrder order, double p,
                             const QuadratureConfig& cfg = fracops_config()) {
  if (p < 0.0) throw DomainError("fractional integral requires a nonnegative point");
  if (p == 0.0) return 0.0;
  const double g = order.value;
  const std::array<double, 4> breaks{1e-8 * p, 1e-6 * p, 1e-4 * p, 1e-2 * p};
  if (g == 1.0) return integrate(f, 0.0, p, cfg, breaks).value;
  if (g > 1.0) {
    auto integrand = [&](double tau) { return std::pow(p - tau, g - 1.0) * f(tau); };
    return integrate(integrand, 0.0, p, cfg, breaks).value * rgamma(g);
  }
  const double half = 0.5 * p;
  auto near = [&](double tau) { return std::pow(p - tau, g - 1.0) * f(tau); };
  const double lower = integrate(near, 0.0, half, cfg, breaks).value;
  const double inv = 1.0 / g;
  auto mapped = [&](double w) { return f(p - std::pow(w, inv)); };
  const double upper = integrate(mapped, 0.0, std::pow(half, g), cfg).value / g;
  return (lower + upper) * rgamma(g);
}

// Caputo derivative I^{n-g} f^{(n)}; `deriv(n, u)` supplies f^{(n)}.
inline double caputo_1d(const std::function<double(int, double)>& deriv, FracOrder order,
                        double p, const QuadratureConfig& cfg = fracops_config()) {
  const int n = order.ceil;
  if (order.is_integer()) return deriv(n, p);
  const ScalarFn dn = [&deriv, n](double u) { return deriv(n, u); };
  return rl_integral_1d(dn, FracOrder::of(n - order.value), p, cfg);
}

// Riemann-Liouville derivative (d/dp)^n I^{n-g} f, the outer derivative by
// central differences. Integer orders use `classical(n, p)` when given.
inline double rl_derivative_1d(const ScalarFn& f, FracOrder order, double p,
                               const QuadratureConfig& cfg = fracops_config(),
                               const std::function<double(int, double)>& classical = {}) {
  const int n = order.ceil;
  if (order.is_integer()) {
    if (!classical) throw MissingDerivative("integer-order derivative needs a classical evaluator");
    return classical(n, p);
  }
  if (!(p > 0.0)) throw DomainError("Riemann-Liouville derivative requires a positive point");
  const FracOrder inner = FracOrder::of(n - order.value);
  auto G = [&](double u) { return rl_integral_1d(f, inner, u, cfg); };
  double h = detail::fd_step(n, p);
  h = std::min(h, p / n);
  // sum_k (-1)^k C(n,k) G(p + (n/2 - k) h) / h^n
  double acc = 0.0, binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    acc += ((k % 2) ? -binom : binom) * G(p + (0.5 * n - k) * h);
    binom = binom * (n - k) / (k + 1);
  }
  return acc / std::pow(h, n);
}

// ---------------------------------------------------------------------------
// Field versions: the operator acts along one axis, other coordinates fixed.

inline double rl_integral(const SmoothFn& f, Axis axis, FracOrder order, const Point3& point,
                          const QuadratureConfig& cfg = fracops_config()) {
  const ScalarFn g = [&](double u) { return f(detail::with_coord(point, axis, u)); };
  return rl_integral_1d(g, order, point[index(axis)], cfg);
}

inline double caputo_derivative(const SmoothFn& f, Axis axis, FracOrder order,
                                 const Point3& point,
                                 const QuadratureConfig& cfg = fracops_config()) {
  MultiIndex m{0, 0, 0};
  m[index(axis)] = order.ceil;
  if (!f.provides(m) || !f.deriv)
    throw MissingDerivative("Caputo derivative of order " + std::to_string(order.value) +
                            " needs d^" + std::to_string(order.ceil) + "f/d" +
                            std::string(name(axis)));
  auto deriv = [&](int n, double u) {
    MultiIndex mm{0, 0, 0};
    mm[index(axis)] = n;
    return f.derivative(mm, detail::with_coord(point, axis, u));
  };
  return caputo_1d(deriv, order, point[index(axis)], cfg);
}

inline double rl_derivative(const SmoothFn& f, Axis axis, FracOrder order, const Point3& point,
                            const QuadratureConfig& cfg = fracops_config()) {
  const ScalarFn g = [&](double u) { return f(detail::with_coord(point, axis, u)); };
  auto classical = [&](int n, double u) {
    MultiIndex m{0, 0, 0};
    m[index(axis)] = n;
    return f.derivative(m, detail::with_coord(point, axis, u));
  };
  return rl_derivative_1d(g, order, point[index(axis)], cfg, classical);
}

// Two-axis integral I^{o1}_{a1} I^{o2}_{a2} f written as one double integral
// over [0, p1] x [0, p2] with the product kernel.
inline double mixed_rl_integral(const SmoothFn& f, Axis a1, FracOrder o1, Axis a2,
                                FracOrder o2, const Point3& point,
                                const QuadratureConfig& cfg = fracops_config()) {
  if (a1 == a2) throw DomainError("mixed integral needs two distinct axes");
  const double p1 = point[index(a1)], p2 = point[index(a2)];
  if (p1 == 0.0 || p2 == 0.0) return 0.0;
  const double g1 = o1.value, g2 = o2.value;
  // Substitute tau_i = p_i - w_i^{1/g_i}; the kernel Jacobian is 1/g_i.
  auto outer = [&](double w1) {
    const double tau1 = std::max(0.0, p1 - std::pow(w1, 1.0 / g1));
    auto inner = [&](double w2) {
      Point3 q = point;
      q[index(a1)] = tau1;
      q[index(a2)] = std::max(0.0, p2 - std::pow(w2, 1.0 / g2));
      return f(q);
    };
    return integrate(inner, 0.0, std::pow(p2, g2), cfg).value;
  };
  return integrate(outer, 0.0, std::pow(p1, g1), cfg).value * rgamma(g1 + 1.0) *
         rgamma(g2 + 1.0);
}

// ---------------------------------------------------------------------------
// Profiles transformed by a fractional operator. The certificate follows from
// |I^a g|(u) <= M e^{max(sigma,0) u} u^a / Gamma(a+1).

inline Profile fractional_integral(const Profile& g, FracOrder order,
                                   const QuadratureConfig& cfg = fracops_config(),
                                   double delta = profiles::kDefaultSlack) {
  const double a = order.value;
  auto base = g.eval;
  return {"I^" + std::to_string(a) + "[" + g.name + "]",
          [base, order, cfg](int, double u) {
            const ScalarFn f = [&base](double v) { return base(0, v); };
            return rl_integral_1d(f, order, u, cfg);
          },
          0, g.M * profiles::power_bound(a, delta) * rgamma(a + 1.0),
          std::max(g.sigma, 0.0) + delta};
}

inline Profile caputo(const Profile& g, FracOrder order,
                      const QuadratureConfig& cfg = fracops_config(),
                      double delta = profiles::kDefaultSlack) {
  if (order.ceil > g.max_order)
    throw MissingDerivative("profile '" + g.name + "' lacks derivative order " +
                            std::to_string(order.ceil));
  auto base = g.eval;
  const double a = order.ceil - order.value;
  return {"D^" + std::to_string(order.value) + "[" + g.name + "]",
          [base, order, cfg](int, double u) { return caputo_1d(base, order, u, cfg); }, 0,
          g.M * profiles::power_bound(a, delta) * rgamma(a + 1.0) + g.M,
          std::max(g.sigma, 0.0) + delta};
}

}  // namespace shehu

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shehu/errors.hpp"
#include "shehu/specfun.hpp"
#include "shehu/types.hpp"

namespace shehu {

// Mixed partial derivative d^{i+j+k} f / dx^i dy^j dt^k evaluated at a point.
using MixedDerivFn = std::function<double(const MultiIndex&, const Point3&)>;

// A callable field together with evaluators for its partial derivatives up
// to `max_order` along each axis.
struct SmoothFn {
  FieldFn eval;
  MixedDerivFn deriv;
  MultiIndex max_order{0, 0, 0};

  double operator()(const Point3& p) const { return eval(p); }

  bool provides(const MultiIndex& m) const {
    for (int i = 0; i < 3; ++i)
      if (m[i] > max_order[i]) return false;
    return true;
  }

  double derivative(const MultiIndex& m, const Point3& p) const {
    if (m == MultiIndex{0, 0, 0}) return eval(p);
    if (!deriv || !provides(m))
      throw MissingDerivative("field does not provide derivative (" + std::to_string(m[0]) +
                              "," + std::to_string(m[1]) + "," + std::to_string(m[2]) + ")");
    return deriv(m, p);
  }
};

// Exponential-order certificate |f(x,y,t)| <= M exp(sx x + sy y + st t).
struct GrowthBound {
  double M = 1.0;
  std::array<double, 3> sigma{0.0, 0.0, 0.0};
};

// One separable factor with its own certificate |g(u)| <= M e^{sigma u}.
struct Factor1D {
  ScalarFn fn;
  double M = 1.0;
  double sigma = 0.0;
};

// Field of exponential order. When `factors` is set the field equals the
// product of the three one-dimensional factors, which lets transforms
// factorize into one-dimensional quadratures.
struct ExpOrderFn {
  FieldFn eval;
  GrowthBound bound;
  std::optional<std::array<Factor1D, 3>> factors;

  double operator()(const Point3& p) const { return eval(p); }

  // Checks the certificate on a tensor grid of `n` points per axis over
  // [0, extent]^3. Returns the worst ratio |f| / bound (<= 1 means valid).
  double certificate_ratio(double extent = 10.0, int n = 11) const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const Point3 p{extent * i / (n - 1), extent * j / (n - 1), extent * k / (n - 1)};
          const double b = bound.M * std::exp(bound.sigma[0] * p[0] + bound.sigma[1] * p[1] +
                                              bound.sigma[2] * p[2]);
          worst = std::max(worst, std::abs(eval(p)) / b);
        }
    return worst;
  }

  static ExpOrderFn from_factors(std::array<Factor1D, 3> f) {
    ExpOrderFn out;
    out.bound.M = f[0].M * f[1].M * f[2].M;
    out.bound.sigma = {f[0].sigma, f[1].sigma, f[2].sigma};
    out.eval = [f](const Point3& p) { return f[0].fn(p[0]) * f[1].fn(p[1]) * f[2].fn(p[2]); };
    out.factors = std::move(f);
    return out;
  }
};

// One-dimensional profile g(u) with derivatives g^{(n)}(u) for n <= max_order.
// The certificate (M, sigma) covers the profile and each provided derivative.
struct Profile {
  std::string name;
  std::function<double(int, double)> eval;  // (derivative order, u)
  int max_order = 0;
  double M = 1.0;
  double sigma = 0.0;

  double operator()(double u) const { return eval(0, u); }

  double derivative(int n, double u) const {
    if (n > max_order)
      throw MissingDerivative("profile '" + name + "' has no derivative of order " +
                              std::to_string(n));
    return eval(n, u);
  }

  Factor1D factor() const {
    auto e = eval;
    return {[e](double u) { return e(0, u); }, M, sigma};
  }
};

// f(x, y, t) = gx(x) * gy(y) * gt(t).
struct SeparableField {
  std::array<Profile, 3> profiles;

  std::string name() const {
    return profiles[0].name + "*" + profiles[1].name + "*" + profiles[2].name;
  }

  SmoothFn smooth() const {
    auto pr = profiles;
    SmoothFn f;
    f.eval = [pr](const Point3& p) { return pr[0](p[0]) * pr[1](p[1]) * pr[2](p[2]); };
    f.deriv = [pr](const MultiIndex& m, const Point3& p) {
      return pr[0].derivative(m[0], p[0]) * pr[1].derivative(m[1], p[1]) *
             pr[2].derivative(m[2], p[2]);
    };
    f.max_order = {pr[0].max_order, pr[1].max_order, pr[2].max_order};
    return f;
  }

  ExpOrderFn exp_order() const {
    return ExpOrderFn::from_factors(
        {profiles[0].factor(), profiles[1].factor(), profiles[2].factor()});
  }
};

// ---------------------------------------------------------------------------
// Profile catalog.

namespace profiles {

// Slack added to growth rates when bounding u^k by M e^{delta u}.
inline constexpr double kDefaultSlack = 0.1;

// sup_u u^k e^{-delta u} = (k / (e delta))^k.
inline double power_bound(double k, double delta) {
  if (k <= 0.0) return 1.0;
  return std::pow(k / (std::exp(1.0) * delta), k);
}

inline Profile constant(double c = 1.0) {
  return {c == 1.0 ? "1" : std::to_string(c),
          [c](int n, double) { return n == 0 ? c : 0.0; }, 8, std::max(1.0, std::abs(c)), 0.0};
}

// u^k for integer k >= 0.
inline Profile monomial(int k, double delta = kDefaultSlack) {
  double M = 1.0;
  for (int j = 0; j <= k; ++j) {
    double falling = 1.0;
    for (int i = 0; i < j; ++i) falling *= (k - i);
    M = std::max(M, falling * power_bound(k - j, delta));
  }
  return {k == 1 ? "u" : "u^" + std::to_string(k),
          [k](int n, double u) {
            if (n > k) return 0.0;
            double c = 1.0;
            for (int i = 0; i < n; ++i) c *= (k - i);
            return c * std::pow(u, k - n);
          },
          8, M, delta};
}

// u^nu for real nu > -1 (no derivatives unless nu is a nonnegative integer).
inline Profile power(double nu, double delta = kDefaultSlack) {
  if (nu >= 0 && nu == std::floor(nu) && nu < 20) return monomial(static_cast<int>(nu), delta);
  if (nu < 0) {
    // Unbounded at the origin; the certificate only governs the tail.
    return {"u^" + std::to_string(nu), [nu](int, double u) { return std::pow(u, nu); }, 0, 1.0, 0.0};
  }
  return {"u^" + std::to_string(nu), [nu](int, double u) { return std::pow(u, nu); }, 0,
          power_bound(nu, delta), delta};
}

// e^{lambda u}.
inline Profile exponential(double lambda) {
  return {"exp(" + std::to_string(lambda) + "u)",
          [lambda](int n, double u) { return std::pow(lambda, n) * std::exp(lambda * u); }, 8,
          std::max(1.0, std::pow(std::abs(lambda), 8)), lambda};
}

inline Profile sine(double omega) {
  return {"sin(" + std::to_string(omega) + "u)",
          [omega](int n, double u) {
            return std::pow(omega, n) * std::sin(omega * u + 0.5 * kPi * n);
          },
          8, std::max(1.0, std::pow(std::abs(omega), 8)), 0.0};
}

inline Profile cosine(double omega) {
  return {"cos(" + std::to_string(omega) + "u)",
          [omega](int n, double u) {
            return std::pow(omega, n) * std::cos(omega * u + 0.5 * kPi * n);
          },
          8, std::max(1.0, std::pow(std::abs(omega), 8)), 0.0};
}

// u^{beta-1} E_{gamma,beta}(c u^gamma), the kernel whose transform is
// ratio^{gamma-beta} / (ratio^gamma - c).
inline Profile ml_kernel(double gamma, double beta, double c, double delta = kDefaultSlack) {
  MLParams p{gamma, beta};
  p.validate();
  double M, sigma;
  if (c <= 0.0 && gamma <= 1.0 && beta >= gamma) {
    // Completely monotone on the negative axis: |E| <= 1/Gamma(beta).
    M = std::abs(rgamma(beta)) * power_bound(beta - 1.0, delta);
    sigma = beta > 1.0 ? delta : 0.0;
  } else {
    // E_{g,b}(c u^g) ~ (1/g) c^{(1-b)/g} u^{1-b} exp(c^{1/g} u) for c > 0.
    const double rate = std::pow(std::abs(c), 1.0 / gamma);
    M = 2.0 / gamma * std::max(1.0, std::pow(std::abs(c), (1.0 - beta) / gamma)) *
        power_bound(std::abs(beta - 1.0), delta) + 2.0 * std::abs(rgamma(beta));
    sigma = rate + 2.0 * delta;
  }
  return {"mlk(" + std::to_string(gamma) + "," + std::to_string(beta) + "," + std::to_string(c) + ")",
          [p, c](int, double u) {
            if (u == 0.0) return p.beta == 1.0 ? rgamma(1.0) : (p.beta > 1.0 ? 0.0 : HUGE_VAL);
            return std::pow(u, p.beta - 1.0) * mittag_leffler(p, c * std::pow(u, p.gamma));
          },
          0, M, sigma};
}

}  // namespace profiles

}  // namespace shehu

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "shehu/errors.hpp"
#include "shehu/field.hpp"
#include "shehu/quadrature.hpp"
#include "shehu/specfun.hpp"
#include "shehu/types.hpp"

namespace shehu {

// Shehu variable pairs per axis; transforms see only the ratios a/h, b/k, c/l.
struct RatioPoint {
  double a = 1, h = 1;  // x
  double b = 1, k = 1;  // y
  double c = 1, l = 1;  // t

  static RatioPoint from_ratios(double p, double q, double s) { return {p, 1, q, 1, s, 1}; }

  void validate() const {
    if (h == 0 || k == 0 || l == 0) throw DomainError("Shehu variables h, k, l must be nonzero");
  }

  double p() const { return a / h; }
  double q() const { return b / k; }
  double s() const { return c / l; }

  double ratio(Axis ax) const {
    switch (ax) {
      case Axis::x: return p();
      case Axis::y: return q();
      case Axis::t: return s();
    }
    return 0.0;
  }

  std::array<double, 3> ratios() const { return {p(), q(), s()}; }
};

namespace detail {

// Length beyond which the certified tail M e^{-(r - sigma) u} / (r - sigma)
// falls below `tol`.
inline double tail_cut(double M, double rate_gap, double tol) {
  const double U = std::log(std::max(M, 1e-300) / (tol * rate_gap)) / rate_gap;
  return std::max(U, 1.0 / rate_gap);
}

// Graded breakpoints: dense near 0 for endpoint singularities, doubling out
// to the cut.
inline std::vector<double> graded_breaks(double U) {
  std::vector<double> br;
  for (double b : {1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.5})
    if (b < U) br.push_back(b);
  for (double b = 1.0; b < U; b *= 2.0) br.push_back(b);
  return br;
}

}  // namespace detail

// int_0^inf e^{-ratio u} g(u) du for |g(u)| <= M e^{sigma u}.
inline double transform_1d(const ScalarFn& g, double M, double sigma, double ratio,
                           const QuadratureConfig& cfg = {}) {
  cfg.validate();
  const double gap = ratio - sigma;
  if (!(gap > 0.0))
    throw DivergenceError("ratio " + std::to_string(ratio) +
                          " does not exceed the exponential-order rate " + std::to_string(sigma));
  const double U = detail::tail_cut(M, gap, cfg.tail_cut_tol);
  const auto br = detail::graded_breaks(U);
  auto integrand = [&](double u) { return std::exp(-ratio * u) * g(u); };
  return integrate(integrand, 0.0, U, cfg, br).value;
}

inline double transform_1d(const Factor1D& g, double ratio, const QuadratureConfig& cfg = {}) {
  return transform_1d(g.fn, g.M, g.sigma, ratio, cfg);
}

inline double transform_1d(const Profile& g, double ratio, const QuadratureConfig& cfg = {}) {
  return transform_1d(g.factor(), ratio, cfg);
}

// Complex ratio with Re(ratio) above the growth rate. Outside the stated
// scope of forward quadrature; used to feed vertical-line inversion.
inline Complex transform_1d(const Factor1D& g, Complex ratio, const QuadratureConfig& cfg = {}) {
  if (ratio.imag() == 0.0) return transform_1d(g, ratio.real(), cfg);
  cfg.validate();
  const double gap = ratio.real() - g.sigma;
  if (!(gap > 0.0))
    throw DivergenceError("Re(ratio) does not exceed the exponential-order rate");
  const double U = detail::tail_cut(g.M, gap, cfg.tail_cut_tol);
  auto br = detail::graded_breaks(U);
  // One extra break per oscillation keeps panels aligned with the phase.
  const double period = 2.0 * kPi / std::abs(ratio.imag());
  if (U / period < 2000)
    for (double u = period; u < U; u += period) br.push_back(u);
  std::sort(br.begin(), br.end());
  auto re = [&](double u) {
    return std::exp(-ratio.real() * u) * std::cos(ratio.imag() * u) * g.fn(u);
  };
  auto im = [&](double u) {
    return -std::exp(-ratio.real() * u) * std::sin(ratio.imag() * u) * g.fn(u);
  };
  QuadratureConfig c = cfg;
  c.max_subdivisions = std::max(cfg.max_subdivisions, 4 * static_cast<int>(br.size()) + 100);
  return {integrate(re, 0.0, U, c, br).value, integrate(im, 0.0, U, c, br).value};
}

namespace detail {

inline double nested_transform(const ExpOrderFn& f, const std::vector<Axis>& order,
                               std::size_t level, Point3 pt, const RatioPoint& vars,
                               const QuadratureConfig& cfg) {
  if (level == order.size()) return f(pt);
  const Axis ax = order[level];
  const int i = index(ax);
  // Certificate restricted to this axis: the remaining coordinates are frozen
  // (outer levels) or integrated later against their own kernels.
  double M = f.bound.M;
  for (int j = 0; j < 3; ++j)
    if (j != i) M *= std::exp(f.bound.sigma[j] * pt[j]);
  const ScalarFn g = [&](double u) {
    Point3 q = pt;
    q[i] = u;
    return nested_transform(f, order, level + 1, q, vars, cfg);
  };
  // Inner transforms are bounded by M times their own kernel integrals.
  double inner = 1.0;
  for (std::size_t m = level + 1; m < order.size(); ++m) {
    const int j = index(order[m]);
    inner /= (vars.ratio(order[m]) - f.bound.sigma[j]);
  }
  return transform_1d(g, M * inner, f.bound.sigma[i], vars.ratio(ax), cfg);
}

}  // namespace detail

// Transform over the axes in `order` (outermost first), with the remaining
// coordinates fixed at `at`. Always nested, ignoring any separable factors.
inline double shehu_ordered(const ExpOrderFn& f, const std::vector<Axis>& order,
                            const RatioPoint& vars, const QuadratureConfig& cfg = {},
                            const Point3& at = {0, 0, 0}) {
  vars.validate();
  AxisMask seen = 0;
  for (Axis a : order) {
    if (contains(seen, a)) throw DomainError("axis repeated in transform order");
    seen |= bit(a);
    if (!(vars.ratio(a) > f.bound.sigma[index(a)]))
      throw DivergenceError(std::string("ratio on axis ") + std::string(name(a)) +
                            " does not exceed the exponential-order rate");
  }
  Point3 start = at;
  for (Axis a : order) start[index(a)] = 0.0;
  return detail::nested_transform(f, order, 0, start, vars, cfg);
}

// Transform over the axes in `mask`; the other coordinates are fixed at `at`.
// Separable fields factor into one-dimensional transforms.
inline double shehu_partial(const ExpOrderFn& f, AxisMask mask, const RatioPoint& vars,
                            const QuadratureConfig& cfg = {}, const Point3& at = {0, 0, 0}) {
  vars.validate();
  if (f.factors) {
    double v = 1.0;
    for (Axis a : kAllAxes) {
      const auto& g = (*f.factors)[index(a)];
      v *= contains(mask, a) ? transform_1d(g, vars.ratio(a), cfg) : g.fn(at[index(a)]);
      if (v == 0.0) return 0.0;
    }
    return v;
  }
  // Default nesting: t innermost, x outermost.
  std::vector<Axis> order;
  for (Axis a : kAllAxes)
    if (contains(mask, a)) order.push_back(a);
  return shehu_ordered(f, order, vars, cfg, at);
}

inline double shehu_1d(const ExpOrderFn& f, Axis axis, const RatioPoint& vars,
                       const QuadratureConfig& cfg = {}, const Point3& at = {0, 0, 0}) {
  return shehu_partial(f, bit(axis), vars, cfg, at);
}

inline double shehu_2d(const ExpOrderFn& f, std::array<Axis, 2> axes, const RatioPoint& vars,
                       const QuadratureConfig& cfg = {}, const Point3& at = {0, 0, 0}) {
  if (axes[0] == axes[1]) throw DomainError("double transform needs two distinct axes");
  return shehu_partial(f, bit(axes[0]) | bit(axes[1]), vars, cfg, at);
}

inline double shehu_3d(const ExpOrderFn& f, const RatioPoint& vars,
                       const QuadratureConfig& cfg = {}) {
  return shehu_partial(f, kAllMask, vars, cfg);
}

// Triple transform at complex ratios; separable fields only.
inline Complex shehu_3d_complex(const ExpOrderFn& f, const std::array<Complex, 3>& ratios,
                                const QuadratureConfig& cfg = {}) {
  if (!f.factors) throw DomainError("complex-ratio transforms need a separable field");
  Complex v{1.0, 0.0};
  for (int i = 0; i < 3; ++i) v *= transform_1d((*f.factors)[i], ratios[i], cfg);
  return v;
}

// ---------------------------------------------------------------------------
// Closed-form single-axis pairs.

namespace kinds {
struct Power { double nu; };                       // u^nu
struct Exp { double lambda; };                     // e^{lambda u}
struct Sin { double omega; };                      // sin(omega u)
struct Cos { double omega; };                      // cos(omega u)
struct MLKernel { double gamma, beta, c; };        // u^{beta-1} E_{gamma,beta}(c u^gamma)
}  // namespace kinds

using TransformKind =
    std::variant<kinds::Power, kinds::Exp, kinds::Sin, kinds::Cos, kinds::MLKernel>;

inline Complex analytic_transform(const TransformKind& kind, Complex r) {
  struct Visitor {
    Complex r;
    Complex operator()(const kinds::Power& k) const {
      if (!(k.nu > -1.0)) throw DomainError("power transform needs nu > -1");
      return gamma_fn(k.nu + 1.0) / std::pow(r, k.nu + 1.0);
    }
    Complex operator()(const kinds::Exp& k) const {
      if (r == Complex{k.lambda, 0.0}) throw DomainError("ratio equals the exponential rate");
      return 1.0 / (r - k.lambda);
    }
    Complex operator()(const kinds::Sin& k) const { return k.omega / (r * r + k.omega * k.omega); }
    Complex operator()(const kinds::Cos& k) const { return r / (r * r + k.omega * k.omega); }
    Complex operator()(const kinds::MLKernel& k) const {
      MLParams{k.gamma, k.beta}.validate();
      const Complex rg = std::pow(r, k.gamma);
      // Boundary |c| = |r^gamma| is admitted away from the pole itself.
      if (std::abs(k.c) > std::abs(rg) * (1.0 + 1e-15) || std::abs(rg - k.c) == 0.0)
        throw DomainError("Mittag-Leffler kernel pair requires |c| < |ratio^gamma|");
      return std::pow(r, k.gamma - k.beta) / (rg - k.c);
    }
  };
  if (r == Complex{0.0, 0.0}) throw DomainError("ratio must be nonzero");
  return std::visit(Visitor{r}, kind);
}

inline double analytic_transform(const TransformKind& kind, double r) {
  return analytic_transform(kind, Complex{r, 0.0}).real();
}

inline std::string kind_name(const TransformKind& kind) {
  struct Visitor {
    std::string operator()(const kinds::Power& k) const { return "power(" + std::to_string(k.nu) + ")"; }
    std::string operator()(const kinds::Exp& k) const { return "exp(" + std::to_string(k.lambda) + ")"; }
    std::string operator()(const kinds::Sin& k) const { return "sin(" + std::to_string(k.omega) + ")"; }
    std::string operator()(const kinds::Cos& k) const { return "cos(" + std::to_string(k.omega) + ")"; }
    std::string operator()(const kinds::MLKernel& k) const {
      return "ml_kernel(" + std::to_string(k.gamma) + "," + std::to_string(k.beta) + "," +
             std::to_string(k.c) + ")";
    }
  };
  return std::visit(Visitor{}, kind);
}

// Profile whose closed-form transform is `kind`.
inline Profile profile_of(const TransformKind& kind) {
  struct Visitor {
    Profile operator()(const kinds::Power& k) const { return profiles::power(k.nu); }
    Profile operator()(const kinds::Exp& k) const { return profiles::exponential(k.lambda); }
    Profile operator()(const kinds::Sin& k) const { return profiles::sine(k.omega); }
    Profile operator()(const kinds::Cos& k) const { return profiles::cosine(k.omega); }
    Profile operator()(const kinds::MLKernel& k) const {
      return profiles::ml_kernel(k.gamma, k.beta, k.c);
    }
  };
  return std::visit(Visitor{}, kind);
}

}  // namespace shehu

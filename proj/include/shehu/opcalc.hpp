#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shehu/errors.hpp"
#include "shehu/field.hpp"
#include "shehu/forward.hpp"
#include "shehu/fracops.hpp"
#include "shehu/quadrature.hpp"
#include "shehu/types.hpp"

namespace shehu {

// Per-axis operator orders; an empty slot (or order 0) means no operator.
struct AxisOrders {
  std::array<std::optional<FracOrder>, 3> order;

  static AxisOrders on(Axis a, double v) { return AxisOrders{}.set(a, v); }

  AxisOrders& set(Axis a, double v) {
    if (v < 0.0) throw DomainError("operator order must be nonnegative");
    if (v == 0.0)
      order[index(a)].reset();
    else
      order[index(a)] = FracOrder::of(v);
    return *this;
  }

  const std::optional<FracOrder>& operator[](Axis a) const { return order[index(a)]; }

  AxisMask mask() const {
    AxisMask m = 0;
    for (Axis a : kAllAxes)
      if (order[index(a)]) m |= bit(a);
    return m;
  }
};

namespace detail {

inline double ratio_pow(const RatioPoint& vars, Axis a, double e) {
  const double r = vars.ratio(a);
  if (!(r > 0.0)) throw DomainError(std::string("ratio on axis ") + std::string(name(a)) + " must be positive");
  return std::pow(r, e);
}

// Subsets of `m` (including the empty set), largest first.
inline std::vector<AxisMask> subsets(AxisMask m) {
  std::vector<AxisMask> out;
  for (AxisMask s = m;; s = static_cast<AxisMask>((s - 1) & m)) {
    out.push_back(s);
    if (s == 0) break;
  }
  return out;
}

}  // namespace detail

// ratio^{-order} on each operator axis times the transform of f.
inline double integral_rule(double Fhat, const RatioPoint& vars, const AxisOrders& orders) {
  vars.validate();
  double v = Fhat;
  for (Axis a : kAllAxes)
    if (orders[a]) v *= detail::ratio_pow(vars, a, -orders[a]->value);
  return v;
}

// Boundary data for the Caputo rules. An entry keyed by (fixed, index) is the
// transform, over the transformed axes outside `fixed`, of
// d^index f with the `fixed` coordinates set to 0. index is zero off `fixed`.
// Faces have one fixed axis, edges two, and the corner all three (a plain
// derivative value).
struct BoundaryKey {
  AxisMask fixed = 0;
  MultiIndex index{0, 0, 0};
  auto operator<=>(const BoundaryKey&) const = default;
};

class BoundaryTransforms {
 public:
  void set(AxisMask fixed, const MultiIndex& idx, double v) { values_[{fixed, idx}] = v; }

  bool has(AxisMask fixed, const MultiIndex& idx) const { return values_.count({fixed, idx}) > 0; }

  double get(AxisMask fixed, const MultiIndex& idx) const {
    auto it = values_.find({fixed, idx});
    if (it == values_.end())
      throw MissingBoundary("no boundary transform for fixed mask " + std::to_string(fixed) +
                            " index (" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) +
                            "," + std::to_string(idx[2]) + ")");
    return it->second;
  }

  std::size_t size() const { return values_.size(); }

  // Every index demanded on the fixed axes: i_a in [0, ceil(order_a)).
  static std::vector<MultiIndex> indices(AxisMask fixed, const AxisOrders& orders) {
    std::vector<MultiIndex> out{{0, 0, 0}};
    for (Axis a : kAllAxes) {
      if (!contains(fixed, a)) continue;
      const int n = orders[a] ? orders[a]->ceil : 0;
      std::vector<MultiIndex> next;
      for (const auto& m : out)
        for (int i = 0; i < n; ++i) {
          MultiIndex k = m;
          k[index(a)] = i;
          next.push_back(k);
        }
      out = std::move(next);
    }
    return out;
  }

 private:
  std::map<BoundaryKey, double> values_;
};

// Rule value plus the largest single term, which sets the scale for
// relative errors when the terms cancel.
struct RuleValue {
  double value = 0.0;
  double scale = 0.0;
};

// Caputo rule as the tensor product of the one-axis rule
//   H(D^o g) = r^o H(g) - sum_{i<n} r^{o-1-i} g^{(i)}(0)
// over every operator axis: each subset S of operator axes contributes
// (-1)^|S| prod_{a not in S} r_a^{o_a} prod_{a in S} r_a^{o_a-1-i_a} B(S, i).
inline RuleValue caputo_rule_terms(double Fhat, const RatioPoint& vars, const AxisOrders& orders,
                                   const BoundaryTransforms& boundary) {
  vars.validate();
  const AxisMask D = orders.mask();
  RuleValue out;
  for (AxisMask S : detail::subsets(D)) {
    double lead = 1.0;
    for (Axis a : kAllAxes)
      if (contains(D, a) && !contains(S, a)) lead *= detail::ratio_pow(vars, a, orders[a]->value);
    const double sign = popcount(S) % 2 ? -1.0 : 1.0;
    if (S == 0) {
      const double term = lead * Fhat;
      out.value += term;
      out.scale = std::max(out.scale, std::abs(term));
      continue;
    }
    for (const auto& idx : BoundaryTransforms::indices(S, orders)) {
      double coef = lead;
      for (Axis a : kAllAxes)
        if (contains(S, a))
          coef *= detail::ratio_pow(vars, a, orders[a]->value - 1.0 - idx[index(a)]);
      const double term = coef * boundary.get(S, idx);
      out.value += sign * term;
      out.scale = std::max(out.scale, std::abs(term));
    }
  }
  return out;
}

inline double caputo_rule(double Fhat, const RatioPoint& vars, const AxisOrders& orders,
                          const BoundaryTransforms& boundary) {
  return caputo_rule_terms(Fhat, vars, orders, boundary).value;
}

// Multi-axis rules in their printed form, kept for comparison only.
// Three axes: face terms carry r^{-1-i} alone, no edge terms, corner added.
// Two axes (first, second in x, y, t order with orders beta, gamma): the
// first face term carries r_2^{gamma-1} in place of r_2^gamma.
inline double caputo_rule_printed(double Fhat, const RatioPoint& vars, const AxisOrders& orders,
                                  const BoundaryTransforms& boundary) {
  const AxisMask D = orders.mask();
  if (popcount(D) < 2) return caputo_rule(Fhat, vars, orders, boundary);
  auto rp = [&](Axis a, double e) { return detail::ratio_pow(vars, a, e); };
  auto n = [&](Axis a) { return orders[a]->ceil; };
  auto o = [&](Axis a) { return orders[a]->value; };
  if (popcount(D) == 3) {
    const Axis X = Axis::x, Y = Axis::y, T = Axis::t;
    double v = rp(X, o(X)) * rp(Y, o(Y)) * rp(T, o(T)) * Fhat;
    double bx = 0.0, by = 0.0, bt = 0.0, corner = 0.0;
    for (int u = 0; u < n(X); ++u) bx += rp(X, -1.0 - u) * boundary.get(bit(X), {u, 0, 0});
    for (int j = 0; j < n(Y); ++j) by += rp(Y, -1.0 - j) * boundary.get(bit(Y), {0, j, 0});
    for (int i = 0; i < n(T); ++i) bt += rp(T, -1.0 - i) * boundary.get(bit(T), {0, 0, i});
    for (int i = 0; i < n(T); ++i)
      for (int j = 0; j < n(Y); ++j)
        for (int u = 0; u < n(X); ++u)
          corner += rp(X, -1.0 - u) * rp(Y, -1.0 - j) * rp(T, -1.0 - i) *
                    boundary.get(kAllMask, {u, j, i});
    return v - (bx - by) - bt + corner;
  }
  Axis first{}, second{};
  bool have = false;
  for (Axis a : kAllAxes)
    if (contains(D, a)) {
      (have ? second : first) = a;
      have = true;
    }
  auto at = [](Axis a, int k) {
    MultiIndex m{0, 0, 0};
    m[index(a)] = k;
    return m;
  };
  double v = rp(first, o(first)) * rp(second, o(second)) * Fhat;
  double f1 = 0.0, f2 = 0.0, corner = 0.0;
  for (int j = 0; j < n(first); ++j)
    f1 += rp(first, o(first) - 1.0 - j) * boundary.get(bit(first), at(first, j));
  f1 *= rp(second, o(second) - 1.0);
  for (int i = 0; i < n(second); ++i)
    f2 += rp(second, o(second) - 1.0 - i) * boundary.get(bit(second), at(second, i));
  f2 *= rp(first, o(first));
  for (int i = 0; i < n(second); ++i)
    for (int j = 0; j < n(first); ++j) {
      MultiIndex m{0, 0, 0};
      m[index(first)] = j;
      m[index(second)] = i;
      corner += rp(second, o(second) - 1.0 - i) * rp(first, o(first) - 1.0 - j) *
                boundary.get(bit(first) | bit(second), m);
    }
  return v - f1 - f2 + corner;
}

namespace detail {

inline void check_operator_axes(const AxisOrders& orders, AxisMask transformed) {
  if (orders.mask() & ~transformed)
    throw DomainError("operator axes must be among the transformed axes");
}

}  // namespace detail

// Boundary transforms by quadrature for a general field. `bound` must also
// cover the derivatives that are requested.
inline BoundaryTransforms compute_boundary(const SmoothFn& f, const GrowthBound& bound,
                                           const AxisOrders& orders, AxisMask transformed,
                                           const RatioPoint& vars, const Point3& at = {0, 0, 0},
                                           const QuadratureConfig& cfg = {}) {
  detail::check_operator_axes(orders, transformed);
  BoundaryTransforms out;
  for (AxisMask S : detail::subsets(orders.mask())) {
    if (S == 0) continue;
    for (const auto& idx : BoundaryTransforms::indices(S, orders)) {
      ExpOrderFn g;
      g.eval = [f, S, idx](const Point3& p) {
        Point3 q = p;
        for (Axis a : kAllAxes)
          if (contains(S, a)) q[index(a)] = 0.0;
        return f.derivative(idx, q);
      };
      g.bound = bound;
      out.set(S, idx, shehu_partial(g, transformed & ~S, vars, cfg, at));
    }
  }
  return out;
}

// Same for a separable field: each entry is a product of 1-D transforms.
inline BoundaryTransforms compute_boundary(const SeparableField& f, const AxisOrders& orders,
                                           AxisMask transformed, const RatioPoint& vars,
                                           const Point3& at = {0, 0, 0},
                                           const QuadratureConfig& cfg = {}) {
  detail::check_operator_axes(orders, transformed);
  BoundaryTransforms out;
  for (AxisMask S : detail::subsets(orders.mask())) {
    if (S == 0) continue;
    for (const auto& idx : BoundaryTransforms::indices(S, orders)) {
      std::array<Factor1D, 3> fac;
      for (Axis a : kAllAxes) {
        const Profile& pr = f.profiles[index(a)];
        if (contains(S, a)) {
          const double d = pr.derivative(idx[index(a)], 0.0);
          fac[index(a)] = {[d](double) { return d; }, std::max(std::abs(d), 1e-300), 0.0};
        } else {
          fac[index(a)] = pr.factor();
        }
      }
      out.set(S, idx, shehu_partial(ExpOrderFn::from_factors(fac), transformed & ~S, vars, cfg, at));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convolution over [0,x] x [0,y] x [0,t].

inline double convolve_1d(const ScalarFn& f, const ScalarFn& g, double u,
                          const QuadratureConfig& cfg = {}) {
  if (u < 0.0) throw DomainError("convolution point must be nonnegative");
  if (u == 0.0) return 0.0;
  return integrate([&](double z) { return f(u - z) * g(z); }, 0.0, u, cfg).value;
}

inline double convolve_3d(const ExpOrderFn& f, const ExpOrderFn& g, const Point3& point,
                          const QuadratureConfig& cfg = {}) {
  for (double c : point)
    if (c < 0.0) throw DomainError("convolution point must be componentwise nonnegative");
  if (point[0] == 0.0 || point[1] == 0.0 || point[2] == 0.0) return 0.0;
  if (f.factors && g.factors) {
    double v = 1.0;
    for (int i = 0; i < 3; ++i) v *= convolve_1d((*f.factors)[i].fn, (*g.factors)[i].fn, point[i], cfg);
    return v;
  }
  auto inner_t = [&](double z1, double z2) {
    return integrate(
               [&](double z3) {
                 return f({point[0] - z1, point[1] - z2, point[2] - z3}) * g({z1, z2, z3});
               },
               0.0, point[2], cfg)
        .value;
  };
  auto inner_y = [&](double z1) {
    return integrate([&](double z2) { return inner_t(z1, z2); }, 0.0, point[1], cfg).value;
  };
  return integrate(inner_y, 0.0, point[0], cfg).value;
}

// f *** g as a field, with certificate
// |f *** g| <= Mf Mg prod_a u_a e^{s_a u_a} <= Mf Mg prod_a e^{(s_a + delta) u_a} / (e delta).
inline ExpOrderFn convolution_field(const ExpOrderFn& f, const ExpOrderFn& g,
                                    const QuadratureConfig& cfg = {},
                                    double delta = profiles::kDefaultSlack) {
  const double shrink = 1.0 / (std::exp(1.0) * delta);
  if (f.factors && g.factors) {
    std::array<Factor1D, 3> fac;
    for (int i = 0; i < 3; ++i) {
      const auto& a = (*f.factors)[i];
      const auto& b = (*g.factors)[i];
      fac[i] = {[fa = a.fn, fb = b.fn, cfg](double u) { return convolve_1d(fa, fb, u, cfg); },
                a.M * b.M * shrink, std::max(a.sigma, b.sigma) + delta};
    }
    return ExpOrderFn::from_factors(fac);
  }
  ExpOrderFn h;
  h.eval = [f, g, cfg](const Point3& p) { return convolve_3d(f, g, p, cfg); };
  h.bound.M = f.bound.M * g.bound.M * shrink * shrink * shrink;
  for (int i = 0; i < 3; ++i) h.bound.sigma[i] = std::max(f.bound.sigma[i], g.bound.sigma[i]) + delta;
  return h;
}

}  // namespace shehu

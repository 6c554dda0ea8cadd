#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "shehu/errors.hpp"
#include "shehu/fracops.hpp"
#include "shehu/grid.hpp"
#include "shehu/inverse.hpp"
#include "shehu/specfun.hpp"
#include "shehu/types.hpp"

namespace shehu {

// Denominators closer to zero than this, relative to the size of their
// parts, are treated as lying on a singular locus.
inline constexpr double kSingularTol = 1e-12;

namespace detail {

inline Complex nonsingular(Complex den, double scale, const std::string& locus) {
  if (!(std::abs(den) > kSingularTol * std::max(scale, 1e-300)))
    throw SingularDenominator("evaluation on the singular locus " + locus);
  return den;
}

inline Complex nonzero_s(Complex s) {
  if (!(std::abs(s) > kSingularTol)) throw SingularDenominator("evaluation on the singular locus s = 0");
  return s;
}

inline void check_gamma(double g) {
  if (!(g > 0.0 && g <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
}

}  // namespace detail

// Boundary and initial data in transform space, all functions of (p, q, s):
// face_x = H_t H_y f(0,y,t), face_y = H_t H_x f(x,0,t),
// dx_face = H_t H_y f_x(0,y,t), dy_face = H_t H_x f_y(x,0,t),
// initial = H_x H_y f(x,y,0).
struct TransformedData {
  TransformFn3 face_x, face_y, dx_face, dy_face, initial;
};

// D_t^gamma f = (f_xx + f_yy) / pi^2 on the quarter plane.
struct HeatSpec {
  FracOrder gamma = FracOrder::of(1.0);
  TransformedData data;

  static HeatSpec make(double g) {
    detail::check_gamma(g);
    HeatSpec h;
    h.gamma = FracOrder::of(g);
    const double pi2 = kPi * kPi;
    const TransformFn3 zero = [](Complex, Complex, Complex) { return Complex{0.0, 0.0}; };
    h.data.face_x = zero;
    h.data.face_y = zero;
    h.data.dx_face = [g](Complex, Complex q, Complex s) {
      const Complex qg = std::pow(q, g);
      return kPi * std::pow(q, g - 1.0) /
             (detail::nonzero_s(s) * detail::nonsingular(1.0 + qg, 1.0 + std::abs(qg), "q^gamma = -1"));
    };
    h.data.dy_face = [g](Complex p, Complex, Complex s) {
      const Complex pg = std::pow(p, g);
      return kPi * std::pow(p, g - 1.0) /
             (detail::nonzero_s(s) * detail::nonsingular(1.0 - pg, 1.0 + std::abs(pg), "p^gamma = 1"));
    };
    h.data.initial = [pi2](Complex p, Complex q, Complex) {
      return pi2 / (detail::nonsingular(p * p + pi2, std::norm(p) + pi2, "p^2 = -pi^2") *
                    detail::nonsingular(q * q + pi2, std::norm(q) + pi2, "q^2 = -pi^2"));
    };
    return h;
  }

  void validate() const { detail::check_gamma(gamma.value); }
};

// D_t^{2 gamma} f + 2 alpha D_t^gamma f + beta^2 f = f_xx + f_yy.
struct TelegraphSpec {
  FracOrder gamma = FracOrder::of(1.0);
  double alpha = 0.5;
  double beta = 1.0;
  TransformedData data;

  static TelegraphSpec make(double g, double alpha, double beta) {
    detail::check_gamma(g);
    if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("alpha and beta must be positive");
    TelegraphSpec t;
    t.gamma = FracOrder::of(g);
    t.alpha = alpha;
    t.beta = beta;
    const TransformFn3 zero = [](Complex, Complex, Complex) { return Complex{0.0, 0.0}; };
    t.data.face_x = zero;
    t.data.face_y = zero;
    t.data.dx_face = [g](Complex, Complex q, Complex s) {
      const Complex qg = std::pow(q, g);
      return kPi * std::pow(q, g - 1.0) /
             (detail::nonzero_s(s) * detail::nonsingular(1.0 + qg, 1.0 + std::abs(qg), "q^gamma = -1"));
    };
    t.data.dy_face = [g](Complex p, Complex, Complex s) {
      const Complex pg = std::pow(p, g);
      return kPi * std::pow(p, g - 1.0) /
             (detail::nonzero_s(s) * detail::nonsingular(pg - 1.0, 1.0 + std::abs(pg), "p^gamma = 1"));
    };
    t.data.initial = [](Complex p, Complex q, Complex) {
      return 1.0 / (detail::nonsingular(p, 1.0, "p = 0") *
                    detail::nonsingular(q + 1.0, 1.0 + std::abs(q), "q = -1"));
    };
    return t;
  }

  void validate() const {
    detail::check_gamma(gamma.value);
    if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("alpha and beta must be positive");
  }
};

struct TransformSolution {
  TransformFn3 evaluator;
  std::vector<std::string> singular_loci;

  Complex operator()(Complex p, Complex q, Complex s) const { return evaluator(p, q, s); }
  double operator()(double p, double q, double s) const { return evaluator(p, q, s).real(); }
};

// The three terms of the heat solution, signs included (they sum to F).
inline std::array<Complex, 3> heat_terms(const HeatSpec& spec, Complex p, Complex q, Complex s) {
  spec.validate();
  const double g = spec.gamma.value, pi2 = kPi * kPi;
  const Complex sg = std::pow(s, g), pg = std::pow(p, g), qg = std::pow(q, g);
  detail::nonzero_s(s);
  const Complex D = detail::nonsingular(pi2 * sg - p * p - q * q,
                                        pi2 * std::abs(sg) + std::norm(p) + std::norm(q),
                                        "pi^2 s^gamma = p^2 + q^2");
  const Complex A = detail::nonsingular(1.0 - pg, 1.0 + std::abs(pg), "p^gamma = 1");
  const Complex B = detail::nonsingular(1.0 + qg, 1.0 + std::abs(qg), "q^gamma = -1");
  const Complex P2 = detail::nonsingular(p * p + pi2, std::norm(p) + pi2, "p^2 = -pi^2");
  const Complex Q2 = detail::nonsingular(q * q + pi2, std::norm(q) + pi2, "q^2 = -pi^2");
  const Complex t1 = pi2 * pi2 * std::pow(s, g - 1.0) / (P2 * Q2 * D);
  const Complex t2 = kPi * p * std::pow(q, g - 1.0) / (s * B * D);
  const Complex t3 = kPi * q * std::pow(p, g - 1.0) / (s * A * D);
  return {t1, -t2, -t3};
}

inline TransformSolution heat_transform_solution(const HeatSpec& spec) {
  spec.validate();
  return {[spec](Complex p, Complex q, Complex s) {
            const auto t = heat_terms(spec, p, q, s);
            return t[0] + t[1] + t[2];
          },
          {"pi^2 s^gamma = p^2 + q^2", "p^gamma = 1", "s = 0"}};
}

inline std::array<Complex, 3> telegraph_terms(const TelegraphSpec& spec, Complex p, Complex q,
                                              Complex s) {
  spec.validate();
  const double g = spec.gamma.value, k = 1.0 + 2.0 * spec.alpha, b2 = spec.beta * spec.beta;
  const Complex sg = std::pow(s, g), pg = std::pow(p, g), qg = std::pow(q, g);
  detail::nonzero_s(s);
  const Complex D = detail::nonsingular(k * sg + b2 - p * p - q * q,
                                        k * std::abs(sg) + b2 + std::norm(p) + std::norm(q),
                                        "(1 + 2 alpha) s^gamma + beta^2 = p^2 + q^2");
  const Complex A = detail::nonsingular(pg - 1.0, 1.0 + std::abs(pg), "p^gamma = 1");
  const Complex B = detail::nonsingular(1.0 + qg, 1.0 + std::abs(qg), "q^gamma = -1");
  const Complex P = detail::nonsingular(p, 1.0, "p = 0");
  const Complex Q1 = detail::nonsingular(q + 1.0, 1.0 + std::abs(q), "q = -1");
  const Complex t1 = k * std::pow(s, g - 1.0) / (P * Q1 * D);
  const Complex t2 = kPi * p * std::pow(q, g - 1.0) / (s * B * D);
  const Complex t3 = kPi * q * std::pow(p, g - 1.0) / (s * A * D);
  return {t1, -t2, -t3};
}

inline TransformSolution telegraph_transform_solution(const TelegraphSpec& spec) {
  spec.validate();
  return {[spec](Complex p, Complex q, Complex s) {
            const auto t = telegraph_terms(spec, p, q, s);
            return t[0] + t[1] + t[2];
          },
          {"(1 + 2 alpha) s^gamma + beta^2 = p^2 + q^2", "p^gamma = 1", "s = 0"}};
}

// |LHS - RHS| of the transformed heat equation with F in place of the
// unknown transform.
inline double heat_residual(const HeatSpec& spec, const TransformSolution& F, Complex p, Complex q,
                            Complex s) {
  spec.validate();
  const double g = spec.gamma.value, pi2 = kPi * kPi;
  const auto& d = spec.data;
  const Complex f = F(p, q, s);
  const Complex lhs = std::pow(s, g) * f;
  const Complex rhs = std::pow(s, g - 1.0) * d.initial(p, q, s) +
                      (p * p * f - d.face_x(p, q, s) - p * d.dx_face(p, q, s) + q * q * f -
                       d.face_y(p, q, s) - q * d.dy_face(p, q, s)) /
                          pi2;
  return std::abs(lhs - rhs);
}

// Printed: the two time-derivative terms are combined as (1 + 2 alpha) s^gamma.
// Strict: s^{2 gamma} F - s^{2 gamma - 1} f(0) [- s^{2 gamma - 2} f_t(0), taken
// as 0] + 2 alpha (s^gamma F - s^{gamma - 1} f(0)), comparison only.
enum class TelegraphReading { Printed, Strict };

inline double telegraph_residual(const TelegraphSpec& spec, const TransformSolution& F, Complex p,
                                 Complex q, Complex s,
                                 TelegraphReading reading = TelegraphReading::Printed) {
  spec.validate();
  const double g = spec.gamma.value, a = spec.alpha, b2 = spec.beta * spec.beta;
  const auto& d = spec.data;
  const Complex f = F(p, q, s);
  const Complex init = d.initial(p, q, s);
  const Complex space = p * p * f - d.face_x(p, q, s) - p * d.dx_face(p, q, s) + q * q * f -
                        d.face_y(p, q, s) - q * d.dy_face(p, q, s);
  Complex lhs, rhs;
  if (reading == TelegraphReading::Printed) {
    lhs = (1.0 + 2.0 * a) * std::pow(s, g) * f + b2 * f;
    rhs = (1.0 + 2.0 * a) * std::pow(s, g - 1.0) * init + space;
  } else {
    lhs = std::pow(s, 2.0 * g) * f - std::pow(s, 2.0 * g - 1.0) * init +
          2.0 * a * (std::pow(s, g) * f - std::pow(s, g - 1.0) * init) + b2 * f;
    rhs = space;
  }
  return std::abs(lhs - rhs);
}

// Triple inversion at every grid node. Nodes where the inversion fails are
// left non-finite; an over-budget configuration fails up front.
inline Grid3Field reconstruct(const TransformSolution& F, const Grid3Spec& grid,
                              const InversionConfig& cfg = {}, unsigned threads = 0) {
  grid.validate();
  for (int a = 0; a < 3; ++a)
    if (!(grid.origin[a] > 0.0)) throw DomainError("reconstruction grid must be strictly positive");
  const Point3 first = grid.node(0, 0, 0);
  const double cost = static_cast<double>(inversion_nodes(first[0], cfg).size()) *
                      inversion_nodes(first[1], cfg).size() * inversion_nodes(first[2], cfg).size();
  if (cost > cfg.eval_budget)
    throw CostBudgetError("triple inversion needs " + std::to_string(static_cast<long long>(cost)) +
                          " evaluations per node, budget is " +
                          std::to_string(static_cast<long long>(cfg.eval_budget)));
  Grid3Field out(grid, NAN);
  const std::size_t n = grid.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < n; idx = next++) {
      const int k = static_cast<int>(idx % grid.count[2]);
      const int j = static_cast<int>((idx / grid.count[2]) % grid.count[1]);
      const int i = static_cast<int>(idx / (static_cast<std::size_t>(grid.count[2]) * grid.count[1]));
      try {
        out.values[idx] = invert_3d(F.evaluator, grid.node(i, j, k), cfg);
      } catch (const Error&) {
        out.values[idx] = NAN;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

// sum_u Gamma(u + order) / (Gamma(order) u!) (-t)^u = (1 + t)^{-order}.
inline double binomial_series(double order, double t, int max_terms = 200) {
  if (!(std::abs(t) < 1.0)) throw DivergenceError("binomial series needs |t| < 1");
  double term = 1.0, sum = 1.0;
  for (int u = 0; u + 1 < max_terms; ++u) {
    term *= (u + order) / (u + 1.0) * (-t);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Multi-index series with gamma-function coefficients. Each term is
//   sign * (-1)^{alt . idx} * prod Gamma(num) / prod Gamma(den) * prod base^exponent
// with every gamma argument and exponent affine in the indices.

struct Affine {
  double c0 = 0.0;
  std::vector<double> c;  // one coefficient per index (missing = 0)

  double operator()(const std::vector<int>& idx) const {
    double v = c0;
    for (std::size_t k = 0; k < c.size() && k < idx.size(); ++k) v += c[k] * idx[k];
    return v;
  }
};

enum class Base { x, y, t, pi, alpha, beta };

struct PowerFactor {
  Base base;
  Affine exponent;
};

struct SeriesFamily {
  std::string name;
  std::vector<std::string> indices;
  double sign = 1.0;
  std::vector<int> alternating;
  std::vector<Affine> numer_gamma, denom_gamma;
  std::vector<PowerFactor> powers;
};

struct SeriesContext {
  Point3 point{1.0, 1.0, 1.0};
  double alpha = 0.0;
  double beta = 0.0;
};

struct GuardedSeriesResult {
  double value = 0.0;
  std::size_t guarded_count = 0;   // terms with a gamma argument at a pole
  std::size_t overflow_count = 0;  // terms whose magnitude overflows a double
  std::size_t terms_used = 0;
  bool experimental = true;
};

enum class TermStatus { Used, Guarded, Overflow };

struct TermValue {
  TermStatus status = TermStatus::Used;
  double value = 0.0;
};

inline TermValue series_term(const SeriesFamily& fam, const std::vector<int>& idx,
                             const SeriesContext& ctx) {
  for (const auto& a : fam.numer_gamma)
    if (is_nonpositive_integer(a(idx))) return {TermStatus::Guarded, 0.0};
  for (const auto& a : fam.denom_gamma)
    if (is_nonpositive_integer(a(idx))) return {TermStatus::Guarded, 0.0};
  double logv = 0.0, sign = fam.sign;
  for (const auto& a : fam.numer_gamma) {
    const auto lg = log_gamma(a(idx));
    logv += lg.log_abs;
    sign *= lg.sign;
  }
  for (const auto& a : fam.denom_gamma) {
    const auto lg = log_gamma(a(idx));
    logv -= lg.log_abs;
    sign *= lg.sign;
  }
  int alt = 0;
  for (std::size_t k = 0; k < fam.alternating.size() && k < idx.size(); ++k) alt += fam.alternating[k] * idx[k];
  if (alt % 2) sign = -sign;
  for (const auto& pf : fam.powers) {
    double b = 1.0;
    switch (pf.base) {
      case Base::x: b = ctx.point[0]; break;
      case Base::y: b = ctx.point[1]; break;
      case Base::t: b = ctx.point[2]; break;
      case Base::pi: b = kPi; break;
      case Base::alpha: b = ctx.alpha; break;
      case Base::beta: b = ctx.beta; break;
    }
    const double e = pf.exponent(idx);
    if (e == 0.0) continue;
    if (b == 0.0) {
      if (e < 0.0) return {TermStatus::Overflow, 0.0};
      return {TermStatus::Used, 0.0};
    }
    logv += e * std::log(std::abs(b));
    if (b < 0.0 && std::fmod(e, 2.0) != 0.0) sign = -sign;
  }
  if (logv > 700.0) return {TermStatus::Overflow, 0.0};
  return {TermStatus::Used, sign * std::exp(logv)};
}

// Truncation counts by index name; indices not listed use `per_index`.
struct SeriesTruncation {
  int per_index = 8;
  std::map<std::string, int> counts;

  int count(const std::string& name) const {
    auto it = counts.find(name);
    return it == counts.end() ? per_index : it->second;
  }
};

inline GuardedSeriesResult sum_series(const std::vector<SeriesFamily>& families,
                                      const SeriesContext& ctx, const SeriesTruncation& trunc) {
  GuardedSeriesResult r;
  for (const auto& fam : families) {
    const std::size_t d = fam.indices.size();
    std::vector<int> lim(d), idx(d, 0);
    bool empty = false;
    for (std::size_t k = 0; k < d; ++k) {
      lim[k] = trunc.count(fam.indices[k]);
      empty |= lim[k] <= 0;
    }
    if (empty) continue;
    while (true) {
      const auto tv = series_term(fam, idx, ctx);
      switch (tv.status) {
        case TermStatus::Used:
          r.value += tv.value;
          ++r.terms_used;
          break;
        case TermStatus::Guarded: ++r.guarded_count; break;
        case TermStatus::Overflow: ++r.overflow_count; break;
      }
      std::size_t k = 0;
      while (k < d && ++idx[k] == lim[k]) idx[k++] = 0;
      if (k == d) break;
    }
  }
  return r;
}

namespace detail {

inline Affine aff(double c0, std::vector<double> c = {}) { return {c0, std::move(c)}; }

}  // namespace detail

// The printed inverse-transform series of the heat example, term for term.
inline std::vector<SeriesFamily> heat_series_families(double g) {
  using detail::aff;
  const Affine gm1 = aff(-1.0);
  return {
      {"heat-1",
       {"u", "v", "n", "m"},
       1.0,
       {0, 1, 1, 1},
       {aff(0, {-1, 0, 0, 1})},
       {aff(1, {0, 0, 0, 1}), gm1, gm1, gm1, aff(0, {1, 0, 0, 0}), aff(0, {-2, -2, 0, 2}),
        aff(0, {0, 0, -2, -2}), aff(1, {g, 0, 0, 0})},
       {{Base::pi, aff(-2, {-2, -2, -2, 0})},
        {Base::x, aff(-2, {-2, 0, 0, 2})},
        {Base::y, aff(-1, {0, 0, -2, -2})},
        {Base::t, aff(0, {g, 0, 0, 0})}}},
      {"heat-2",
       {"u", "m", "r"},
       -1.0,
       {0, 1, 1},
       {aff(0, {-1, 1, 0})},
       {aff(1, {0, 1, 0}), gm1, gm1, aff(0, {1, 0, 0}), aff(-1, {-2, 2, 0}),
        aff(1 - g, {0, -2, -g}), aff(g + 1, {g, 0, 0})},
       {{Base::pi, aff(-1, {-2, 0, 0})},
        {Base::x, aff(-2, {-1, 2, 0})},
        {Base::y, aff(-g, {0, -2, -g})},
        {Base::t, aff(g, {g, 0, 0})}}},
      {"heat-3",
       {"u", "m"},
       -1.0,
       {0, 1},
       {aff(0, {-1, 1})},
       {aff(1, {0, 1}), gm1, aff(0, {1, 0}), aff(1 - g, {-2, 2}), aff(-1, {0, -2}), aff(g, {g, 0})},
       {{Base::pi, aff(-1, {-2, 0})},
        {Base::x, aff(-g, {-2, 2})},
        {Base::y, aff(-2, {0, -2})},
        {Base::t, aff(g - 1, {g, 0})}}},
  };
}

// The printed inverse-transform series of the telegraph example.
inline std::vector<SeriesFamily> telegraph_series_families(double g) {
  using detail::aff;
  const Affine gm1 = aff(-1.0);
  return {
      {"telegraph-1",
       {"p", "q", "u", "v", "n", "m"},
       1.0,
       {0, 0, 0, 1, 1, 1},
       {aff(0, {0, 0, -1, 0, 0, 1}), aff(0, {1, 1, 0, 0, 0, 0})},
       {aff(1, {0, 0, 0, 0, 0, 1}), gm1, gm1, gm1, aff(0, {0, 0, 1, 0, 0, 0}),
        aff(0, {0, 0, -2, -2, 0, 2}), aff(0, {0, 0, 0, 0, -2, -2}), aff(1, {0, 0, g, 0, 0, 0})},
       {{Base::x, aff(-1, {0, 0, -2, -2, 0, 2})},
        {Base::y, aff(-1, {0, 0, 0, 0, -2, -2})},
        {Base::t, aff(0, {0, 0, g, 0, 0, 0})},
        {Base::alpha, aff(0, {1, 1, 0, 0, 0, 0})},
        {Base::beta, aff(0, {0, 2, 0, 0, 0, 0})},
        {Base::pi, aff(-2, {0, 0, -2, -2, -2, 0})}}},
      {"telegraph-2",
       {"p", "q", "u", "m", "r"},
       -1.0,
       {0, 0, 0, 1, 1},
       {aff(0, {0, 0, -1, 1, 0}), aff(0, {1, 1, 0, 0, 0})},
       {aff(1, {0, 0, 0, 1, 0}), gm1, gm1, aff(0, {0, 0, 1, 0, 0}), aff(-1, {0, 0, -2, 2, 0}),
        aff(1 - g, {0, 0, 0, -2, -g}), aff(g + 1, {0, 0, g, 0, 0})},
       {{Base::x, aff(-2, {0, 0, -1, 2, 0})},
        {Base::y, aff(-g, {0, 0, 0, -2, -g})},
        {Base::t, aff(g, {0, 0, g, 0, 0})},
        {Base::alpha, aff(0, {1, 1, 0, 0, 0})},
        {Base::beta, aff(0, {0, 2, 0, 0, 0})},
        {Base::pi, aff(-1, {0, 0, -2, 0, 0})}}},
      {"telegraph-3",
       {"p", "q", "u", "m"},
       -1.0,
       {0, 0, 0, 1},
       {aff(0, {0, 0, -1, 1}), aff(0, {1, 1, 0, 0})},
       {aff(1, {0, 0, 0, 1}), gm1, aff(0, {0, 0, 1, 0}), aff(1 - g, {0, 0, -2, 2}),
        aff(-1, {0, 0, 0, -2}), aff(g, {0, 0, g, 0})},
       {{Base::x, aff(-g, {0, 0, -2, 2})},
        {Base::y, aff(-2, {0, 0, 0, -2})},
        {Base::t, aff(g - 1, {0, 0, g, 0})},
        {Base::alpha, aff(0, {1, 1, 0, 0})},
        {Base::beta, aff(0, {0, 2, 0, 0})},
        {Base::pi, aff(-1, {0, 0, -2, 0})}}},
  };
}

namespace detail {

inline void check_series_point(const Point3& p) {
  for (double c : p)
    if (!(c > 0.0)) throw DomainError("series point must be componentwise positive");
}

}  // namespace detail

// `families` replaces the printed coefficients when given.
inline GuardedSeriesResult series_solution_heat(const HeatSpec& spec, const Point3& point,
                                                const SeriesTruncation& trunc = {},
                                                const std::optional<std::vector<SeriesFamily>>& families = {}) {
  spec.validate();
  detail::check_series_point(point);
  return sum_series(families ? *families : heat_series_families(spec.gamma.value), {point, 0.0, 0.0},
                    trunc);
}

inline GuardedSeriesResult series_solution_telegraph(
    const TelegraphSpec& spec, const Point3& point, const SeriesTruncation& trunc = {},
    const std::optional<std::vector<SeriesFamily>>& families = {}) {
  spec.validate();
  detail::check_series_point(point);
  return sum_series(families ? *families : telegraph_series_families(spec.gamma.value),
                    {point, spec.alpha, spec.beta}, trunc);
}

}  // namespace shehu

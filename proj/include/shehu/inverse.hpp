#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "shehu/contour.hpp"
#include "shehu/errors.hpp"
#include "shehu/types.hpp"

namespace shehu {

// DeformedContour: Talbot contour (needs F left of the imaginary axis).
// RealNodeWeights: Gaver-Stehfest, F at real ratios only.
// LaguerreSeries: Weeks expansion with `nodes` terms (2 * nodes evaluations),
// F on the vertical line Re = laguerre_sigma; suited to transforms that are
// only available right of their abscissa.
enum class InversionMethod { DeformedContour, RealNodeWeights, LaguerreSeries };

struct InversionConfig {
  InversionMethod method = InversionMethod::DeformedContour;
  int nodes = 32;
  double contour_scale = 1.0;
  double eval_budget = 1e6;  // F evaluations allowed per point in invert_3d
  double laguerre_sigma = 1.0;
  double laguerre_b = 1.0;

  void validate() const {
    if (nodes < 8)
      throw ContourError("inversion needs at least 8 nodes per axis (got " +
                         std::to_string(nodes) + ")");
    if (!(contour_scale > 0.0)) throw DomainError("contour scale must be positive");
    if (!(eval_budget > 0.0)) throw DomainError("evaluation budget must be positive");
    if (!(laguerre_b > 0.0)) throw DomainError("Laguerre scale must be positive");
  }
};

using TransformFn1 = std::function<Complex(Complex)>;
using TransformFn3 = std::function<Complex(Complex, Complex, Complex)>;

// Gaver-Stehfest weights for an even node count; the node count is capped at
// 16 because the alternating weights exhaust double precision beyond that.
inline constexpr int kMaxStehfestNodes = 16;

inline std::vector<double> stehfest_weights(int n) {
  n = std::min(n, kMaxStehfestNodes);
  if (n % 2) --n;
  const int half = n / 2;
  auto fact = [](int k) {
    long double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    long double sum = 0;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      sum += std::pow(static_cast<long double>(j), half) * fact(2 * j) /
             (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    }
    w[k - 1] = static_cast<double>(((k + half) % 2 ? -1.0L : 1.0L) * sum);
  }
  return w;
}

// Quadrature rule for one axis: f(point) ~ Re sum(weight * F(node)).
inline std::vector<ContourNode> inversion_nodes(double point, const InversionConfig& cfg) {
  cfg.validate();
  if (!(point > 0.0)) throw DomainError("inversion point must be positive");
  if (cfg.method == InversionMethod::DeformedContour)
    return TalbotContour{cfg.nodes, point, cfg.contour_scale}.nodes();
  if (cfg.method == InversionMethod::LaguerreSeries) {
    // f(t) = e^{(sigma-b)t} sum_{n<N} a_n L_n(2bt), with a_n the Fourier
    // coefficients of 2b F(s(w)) / (1 - w) on |w| = 1, s(w) = sigma + b(1+w)/(1-w).
    const int N = cfg.nodes;
    const double sig = cfg.laguerre_sigma, b = cfg.laguerre_b, x = 2.0 * b * point;
    std::vector<double> L(static_cast<std::size_t>(N));
    L[0] = 1.0;
    if (N > 1) L[1] = 1.0 - x;
    for (int n = 1; n + 1 < N; ++n) L[n + 1] = ((2 * n + 1 - x) * L[n] - n * L[n - 1]) / (n + 1);
    const double scale = std::exp((sig - b) * point) / (2.0 * N);
    std::vector<ContourNode> out;
    for (int j = -N; j < N; ++j) {
      const double th = (j + 0.5) * kPi / N;
      const Complex w = std::polar(1.0, th);
      Complex acc{0.0, 0.0};
      for (int n = 0; n < N; ++n) acc += std::polar(L[n], -n * th);
      out.push_back({sig + b * (1.0 + w) / (1.0 - w), scale * 2.0 * b / (1.0 - w) * acc});
    }
    return out;
  }
  const auto w = stehfest_weights(cfg.nodes);
  const double a = std::log(2.0) / point;
  std::vector<ContourNode> out;
  for (std::size_t k = 0; k < w.size(); ++k)
    out.push_back({Complex{a * (k + 1), 0.0}, Complex{a * w[k], 0.0}});
  return out;
}

// Complex sum before taking the real part; its imaginary part measures how
// far the discretized contour is from conjugate symmetry.
inline Complex invert_1d_raw(const TransformFn1& F, double point, const InversionConfig& cfg = {}) {
  Complex sum{0.0, 0.0};
  for (const auto& node : inversion_nodes(point, cfg)) {
    const Complex v = F(node.s);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ContourError("transform is not finite at ratio (" + std::to_string(node.s.real()) +
                         ", " + std::to_string(node.s.imag()) + ")");
    sum += node.weight * v;
  }
  return sum;
}

inline double invert_1d(const TransformFn1& F, double point, const InversionConfig& cfg = {}) {
  return invert_1d_raw(F, point, cfg).real();
}

// Iterated inversion over (p, q, s) -> (x, y, t). The real part is taken
// only after the full triple sum, since the partial inverses are complex.
inline double invert_3d(const TransformFn3& F, const Point3& point, const InversionConfig& cfg = {}) {
  cfg.validate();
  const auto nx = inversion_nodes(point[0], cfg);
  const auto ny = inversion_nodes(point[1], cfg);
  const auto nt = inversion_nodes(point[2], cfg);
  const double cost = static_cast<double>(nx.size()) * ny.size() * nt.size();
  if (cost > cfg.eval_budget)
    throw CostBudgetError("triple inversion needs " + std::to_string(static_cast<long long>(cost)) +
                          " evaluations, budget is " +
                          std::to_string(static_cast<long long>(cfg.eval_budget)));
  Complex total{0.0, 0.0};
  for (const auto& a : nx) {
    Complex sy{0.0, 0.0};
    for (const auto& b : ny) {
      Complex st{0.0, 0.0};
      for (const auto& c : nt) {
        const Complex v = F(a.s, b.s, c.s);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw ContourError("transform is not finite on the inversion contour");
        st += c.weight * v;
      }
      sy += b.weight * st;
    }
    total += a.weight * sy;
  }
  return total.real();
}

}  // namespace shehu

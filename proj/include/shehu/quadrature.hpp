#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "shehu/errors.hpp"

namespace shehu {

// Tolerances shared by every quadrature-backed operation.
struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
  // Semi-infinite integrals are cut where the certified tail bound drops
  // below this fraction of the certified transform magnitude.
  double tail_cut_tol = 1e-16;

  void validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(tail_cut_tol > 0))
      throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
  }
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

namespace detail {

struct Panel {
  double a, b, value, error, resabs;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// 7-point Gauss / 15-point Kronrod pair with the QUADPACK error heuristic.
template <class F>
Panel gk15(F& f, double a, double b) {
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  const double fc = static_cast<double>(f(centr));
  double resg = fc * wg[3];
  double resk = fc * wgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double absc = hlgth * xgk[j];
    const double f1 = static_cast<double>(f(centr - absc));
    const double f2 = static_cast<double>(f(centr + absc));
    fv1[j] = f1;
    fv2[j] = f2;
    resk += wgk[j] * (f1 + f2);
    resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = wgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  return {a, b, result, err, resabs};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod quadrature of f over [a, b]. The
// interval is first split at `breaks` (interior points, ascending); the
// panel with the largest error estimate is bisected until the total
// estimate meets max(abs_tol, rel_tol*|I|) or only roundoff remains.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg,
                     std::span<const double> breaks = {}) {
  if (a == b) return {};
  std::priority_queue<detail::Panel> heap;
  double total = 0.0, err = 0.0, total_abs = 0.0;
  double left = a;
  auto push = [&](double lo, double hi) {
    auto p = detail::gk15(f, lo, hi);
    if (!std::isfinite(p.value)) throw QuadratureError("integrand produced non-finite values");
    total += p.value;
    err += p.error;
    total_abs += p.resabs;
    heap.push(p);
  };
  for (double br : breaks) {
    if (br > left && br < b) {
      push(left, br);
      left = br;
    }
  }
  push(left, b);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto converged = [&] {
    const double target = std::max({cfg.abs_tol, cfg.rel_tol * std::abs(total),
                                    1e3 * eps * total_abs});
    return err <= target;
  };
  int intervals = static_cast<int>(heap.size());
  while (!converged()) {
    if (intervals >= cfg.max_subdivisions) {
      if (!std::isfinite(total))
        throw QuadratureError("integrand produced non-finite values");
      throw QuadratureError("adaptive quadrature exhausted " +
                            std::to_string(cfg.max_subdivisions) +
                            " subdivisions (error estimate " +
                            std::to_string(err) + ")");
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in floating point; accept it.
      heap.push({worst.a, worst.b, worst.value, 0.0, worst.resabs});
      err -= worst.error;
      continue;
    }
    total -= worst.value;
    err -= worst.error;
    total_abs -= worst.resabs;
    push(worst.a, mid);
    push(mid, worst.b);
    ++intervals;
  }
  if (!std::isfinite(total))
    throw QuadratureError("integrand produced non-finite values");
  return {total, err, intervals};
}

}  // namespace shehu

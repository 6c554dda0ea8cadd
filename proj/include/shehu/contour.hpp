#pragma once

#include <cmath>
#include <vector>

#include "shehu/types.hpp"

namespace shehu {

// Quadrature node on a deformed Bromwich contour: the inverse transform is
// approximated by Re sum(weight * F(s)).
struct ContourNode {
  Complex s;
  Complex weight;
};

// Cotangent (Talbot-type) contour with the optimized parameters of
// Weideman & Trefethen (2007):
//   s(theta) = L * (sigma + mu * theta * cot(alpha * theta) + i * nu * theta),
// theta in (-pi, pi), L = scale * n / t. Trapezoidal (midpoint) nodes.
struct TalbotContour {
  static constexpr double sigma = -0.6122;
  static constexpr double mu = 0.5017;
  static constexpr double alpha = 0.6407;
  static constexpr double nu = 0.2645;

  int n = 32;
  double t = 1.0;
  double scale = 1.0;

  double length_scale() const { return scale * n / t; }

  static Complex shape(double theta) {
    if (theta == 0.0) return {sigma + mu / alpha, 0.0};
    return {sigma + mu * theta / std::tan(alpha * theta), nu * theta};
  }

  static Complex shape_derivative(double theta) {
    if (theta == 0.0) return {0.0, nu};
    const double at = alpha * theta;
    const double sn = std::sin(at);
    return {mu * (1.0 / std::tan(at) - at / (sn * sn)), nu};
  }

  std::vector<ContourNode> nodes() const {
    std::vector<ContourNode> out;
    out.reserve(static_cast<std::size_t>(n));
    const double L = length_scale();
    const double h = 2.0 * kPi / n;
    const Complex inv_in{0.0, -1.0 / n};  // 1 / (i n)
    for (int k = 0; k < n; ++k) {
      const double theta = -kPi + (k + 0.5) * h;
      const Complex s = L * shape(theta);
      const Complex ds = L * shape_derivative(theta);
      out.push_back({s, inv_in * std::exp(s * t) * ds});
    }
    return out;
  }

  // Signed horizontal distance (in units of L) from the contour to `s`;
  // negative means `s` lies in the enclosed region, +inf means above or
  // below the contour's vertical extent.
  double offset(Complex s) const {
    const double L = length_scale();
    const double theta = s.imag() / (nu * L);
    if (std::abs(theta) >= kPi) return HUGE_VAL;
    const double edge = shape(theta).real() * L;
    return (s.real() - edge) / L;
  }
};

}  // namespace shehu

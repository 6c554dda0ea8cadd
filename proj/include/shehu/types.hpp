#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string_view>

#include "shehu/errors.hpp"

namespace shehu {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Spatial/temporal axes of a field f(x, y, t).
enum class Axis : int { x = 0, y = 1, t = 2 };

inline constexpr std::array<Axis, 3> kAllAxes{Axis::x, Axis::y, Axis::t};

constexpr int index(Axis a) { return static_cast<int>(a); }

constexpr std::string_view name(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::t: return "t";
  }
  return "?";
}

inline Axis parse_axis(std::string_view s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "t") return Axis::t;
  throw DomainError("unknown axis '" + std::string(s) + "'");
}

// Bit set over {x, y, t}; bit i is Axis(i).
using AxisMask = std::uint8_t;

constexpr AxisMask bit(Axis a) { return static_cast<AxisMask>(1u << index(a)); }
constexpr bool contains(AxisMask m, Axis a) { return (m & bit(a)) != 0; }
inline constexpr AxisMask kAllMask = 0b111;

constexpr int popcount(AxisMask m) {
  return ((m >> 0) & 1) + ((m >> 1) & 1) + ((m >> 2) & 1);
}

using Point3 = std::array<double, 3>;
using MultiIndex = std::array<int, 3>;

using ScalarFn = std::function<double(double)>;
using FieldFn = std::function<double(const Point3&)>;

}  // namespace shehu

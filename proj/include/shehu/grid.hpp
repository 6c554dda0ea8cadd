#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shehu/errors.hpp"
#include "shehu/types.hpp"

namespace shehu {

// Uniform tensor grid: node (i, j, k) sits at origin + (i, j, k) * step.
struct Grid3Spec {
  Point3 origin{0.0, 0.0, 0.0};
  Point3 step{1.0, 1.0, 1.0};
  std::array<int, 3> count{1, 1, 1};

  void validate() const {
    for (int a = 0; a < 3; ++a) {
      if (count[a] < 1) throw DomainError("grid needs at least one node per axis");
      if (!(step[a] > 0.0)) throw DomainError("grid steps must be positive");
    }
  }

  std::size_t size() const {
    return static_cast<std::size_t>(count[0]) * count[1] * count[2];
  }

  Point3 node(int i, int j, int k) const {
    return {origin[0] + i * step[0], origin[1] + j * step[1], origin[2] + k * step[2]};
  }

  // n nodes per axis at extent/n, 2 extent/n, ..., extent.
  static Grid3Spec interior(const Point3& extent, const std::array<int, 3>& n) {
    Grid3Spec g;
    for (int a = 0; a < 3; ++a) {
      g.step[a] = extent[a] / n[a];
      g.origin[a] = g.step[a];
      g.count[a] = n[a];
    }
    return g;
  }
};

// Values row-major over (x, y, t): t varies fastest.
struct Grid3Field {
  Grid3Spec spec;
  std::vector<double> values;

  Grid3Field() = default;
  explicit Grid3Field(const Grid3Spec& s, double fill = 0.0) : spec(s), values(s.size(), fill) {
    s.validate();
  }

  std::size_t offset(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * spec.count[1] + j) * spec.count[2] + k;
  }
  double& at(int i, int j, int k) { return values[offset(i, j, k)]; }
  double at(int i, int j, int k) const { return values[offset(i, j, k)]; }

  std::size_t nonfinite() const {
    std::size_t n = 0;
    for (double v : values) n += !std::isfinite(v);
    return n;
  }

  // Trilinear interpolation; points outside the grid are clamped to it.
  double interpolate(const Point3& p) const {
    std::array<int, 3> lo{};
    std::array<double, 3> w{};
    for (int a = 0; a < 3; ++a) {
      const int n = spec.count[a];
      double u = (p[a] - spec.origin[a]) / spec.step[a];
      u = std::clamp(u, 0.0, static_cast<double>(n - 1));
      lo[a] = std::min(static_cast<int>(std::floor(u)), std::max(n - 2, 0));
      w[a] = n > 1 ? u - lo[a] : 0.0;
    }
    double v = 0.0;
    for (int di = 0; di < 2; ++di)
      for (int dj = 0; dj < 2; ++dj)
        for (int dk = 0; dk < 2; ++dk) {
          const double c = (di ? w[0] : 1 - w[0]) * (dj ? w[1] : 1 - w[1]) * (dk ? w[2] : 1 - w[2]);
          if (c == 0.0) continue;
          v += c * at(lo[0] + di, lo[1] + dj, lo[2] + dk);
        }
    return v;
  }

  std::string to_csv() const {
    std::string out = "x,y,t,f\n";
    char buf[128];
    for (int i = 0; i < spec.count[0]; ++i)
      for (int j = 0; j < spec.count[1]; ++j)
        for (int k = 0; k < spec.count[2]; ++k) {
          const Point3 p = spec.node(i, j, k);
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p[0], p[1], p[2], at(i, j, k));
          out += buf;
        }
    return out;
  }

  void write_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DomainError("cannot open '" + path + "' for writing");
    f << to_csv();
  }

  // Reads a table written by to_csv (uniform grid, t fastest).
  static Grid3Field from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,y,t,f") throw DomainError("missing x,y,t,f header");
    std::vector<Point3> pts;
    std::vector<double> vals;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Point3 p{};
      double v = 0.0;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &p[0], &p[1], &p[2], &v) != 4)
        throw DomainError("malformed grid row: " + line);
      pts.push_back(p);
      vals.push_back(v);
    }
    if (pts.empty()) throw DomainError("empty grid table");
    Grid3Spec s;
    s.origin = pts.front();
    std::array<std::vector<double>, 3> axis;
    for (const auto& p : pts)
      for (int a = 0; a < 3; ++a)
        if (std::find(axis[a].begin(), axis[a].end(), p[a]) == axis[a].end()) axis[a].push_back(p[a]);
    for (int a = 0; a < 3; ++a) {
      s.count[a] = static_cast<int>(axis[a].size());
      s.step[a] = s.count[a] > 1 ? (axis[a].back() - axis[a].front()) / (s.count[a] - 1) : 1.0;
    }
    if (s.size() != vals.size()) throw DomainError("grid table is not a full tensor grid");
    Grid3Field g(s);
    g.values = std::move(vals);
    return g;
  }
};

}  // namespace shehu

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "shehu/fd_oracle.hpp"
#include "shehu/fpde.hpp"

namespace shehu {

// Trilinear sample of an interior-node field from the finite-difference
// solvers, with the zero Dirichlet walls at x, y in {0, 1} restored.
inline double sample_dirichlet(const Grid3Field& f, const Point3& p) {
  const auto& sp = f.spec;
  const int nx = sp.count[0], ny = sp.count[1], nt = sp.count[2];
  auto value = [&](int i, int j, int k) {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return 0.0;
    return f.at(i, j, k);
  };
  double u[3], w[3];
  int lo[3];
  u[0] = std::clamp((p[0] - sp.origin[0]) / sp.step[0], -1.0, static_cast<double>(nx));
  u[1] = std::clamp((p[1] - sp.origin[1]) / sp.step[1], -1.0, static_cast<double>(ny));
  u[2] = std::clamp((p[2] - sp.origin[2]) / sp.step[2], 0.0, static_cast<double>(nt - 1));
  const int hi[3] = {nx - 1, ny - 1, nt - 2};
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::min(static_cast<int>(std::floor(u[a])), std::max(hi[a], a == 2 ? 0 : -1));
    w[a] = u[a] - lo[a];
  }
  double v = 0.0;
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj)
      for (int dk = 0; dk < 2; ++dk) {
        const double c = (di ? w[0] : 1 - w[0]) * (dj ? w[1] : 1 - w[1]) * (dk ? w[2] : 1 - w[2]);
        if (c != 0.0) v += c * value(lo[0] + di, lo[1] + dj, lo[2] + dk);
      }
  return v;
}

struct DeviationRow {
  Point3 node;
  double reconstructed = 0.0;
  double oracle = 0.0;
  double abs_dev = 0.0;
  double rel_dev = 0.0;  // abs_dev over the oracle's peak magnitude on the grid
};

struct DeviationReport {
  std::vector<DeviationRow> rows;
  std::size_t nonfinite = 0;
  double max_abs = 0.0;
  double max_rel = 0.0;

  bool full_agreement(double threshold = 0.05) const { return nonfinite == 0 && max_rel <= threshold; }

  std::string to_jsonl() const {
    std::string out;
    for (const auto& r : rows) {
      nlohmann::ordered_json j;
      j["x"] = r.node[0];
      j["y"] = r.node[1];
      j["t"] = r.node[2];
      j["reconstructed"] = std::isfinite(r.reconstructed) ? nlohmann::ordered_json(r.reconstructed)
                                                          : nlohmann::ordered_json("nan");
      j["oracle"] = r.oracle;
      j["abs_dev"] = std::isfinite(r.abs_dev) ? nlohmann::ordered_json(r.abs_dev) : nlohmann::ordered_json("nan");
      j["rel_dev"] = std::isfinite(r.rel_dev) ? nlohmann::ordered_json(r.rel_dev) : nlohmann::ordered_json("nan");
      out += j.dump() + "\n";
    }
    nlohmann::ordered_json s;
    s["summary"] = "heat-vs-l1";
    s["nodes"] = rows.size();
    s["nonfinite"] = nonfinite;
    s["max_abs_dev"] = max_abs;
    s["max_rel_dev"] = max_rel;
    s["full_agreement"] = full_agreement();
    out += s.dump() + "\n";
    return out;
  }
};

// Reconstructed heat solution against the L1 solve started from
// sin(pi x) sin(pi y), the initial data behind the transformed problem.
inline DeviationReport compare_heat_with_oracle(double gamma, const Grid3Spec& grid,
                                                const InversionConfig& cfg, const FDGrid& fd) {
  const auto F = heat_transform_solution(HeatSpec::make(gamma));
  const Grid3Field rec = reconstruct(F, grid, cfg);
  const Grid3Field ref = l1_heat_solve(
      gamma, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); }, fd);
  DeviationReport rep;
  rep.nonfinite = rec.nonfinite();
  double peak = 0.0;
  for (int i = 0; i < grid.count[0]; ++i)
    for (int j = 0; j < grid.count[1]; ++j)
      for (int k = 0; k < grid.count[2]; ++k) {
        DeviationRow r;
        r.node = grid.node(i, j, k);
        r.reconstructed = rec.at(i, j, k);
        r.oracle = sample_dirichlet(ref, r.node);
        r.abs_dev = std::abs(r.reconstructed - r.oracle);
        peak = std::max(peak, std::abs(r.oracle));
        rep.rows.push_back(r);
      }
  for (auto& r : rep.rows) {
    r.rel_dev = peak > 0.0 ? r.abs_dev / peak : r.abs_dev;
    rep.max_abs = std::max(rep.max_abs, std::isfinite(r.abs_dev) ? r.abs_dev : HUGE_VAL);
    rep.max_rel = std::max(rep.max_rel, std::isfinite(r.rel_dev) ? r.rel_dev : HUGE_VAL);
  }
  return rep;
}

}  // namespace shehu

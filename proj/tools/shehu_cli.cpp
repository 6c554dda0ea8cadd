// shehu_cli: transforms, inversions, example solves and verification suites.
// Exit codes: 0 all checks pass, 1 numerical failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shehu/shehu.hpp"

using namespace shehu;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0') throw UsageError("not a number list: '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

Point3 parse_point(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 3) throw UsageError("expected three comma-separated values: '" + text + "'");
  return {v[0], v[1], v[2]};
}

// Writes to a file when a path is given, otherwise to stdout. Content is
// buffered and emitted once.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

struct Common {
  QuadratureConfig quad;
  std::string method = "talbot";
  int nodes = 32;
  double contour_scale = 1.0;
  double eval_budget = 1e6;
  std::uint64_t seed = 7;
  std::string out;

  InversionConfig inversion() const {
    static const std::map<std::string, InversionMethod> methods{
        {"talbot", InversionMethod::DeformedContour},
        {"stehfest", InversionMethod::RealNodeWeights},
        {"laguerre", InversionMethod::LaguerreSeries}};
    InversionConfig c;
    c.method = methods.at(method);
    c.nodes = nodes;
    c.contour_scale = contour_scale;
    c.eval_budget = eval_budget;
    return c;
  }
};

double draw(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// transform

struct TransformArgs {
  int dims = 3;
  std::string axis;
  std::string func = "const";
  std::vector<std::string> ratios;
  std::string at = "0,0,0";
  double nu = 0.5;
  double ml_gamma = 0.5, ml_beta = 1.0, ml_c = -1.0;
};

SeparableField builtin_field(const TransformArgs& a) {
  auto same = [](Profile p) { return SeparableField{{p, p, p}}; };
  if (a.func == "const") return same(profiles::constant());
  if (a.func == "exp-xyt") return same(profiles::exponential(-1.0));
  if (a.func == "sine-product") return same(profiles::sine(kPi));
  if (a.func == "power") return same(profiles::power(a.nu));
  if (a.func == "ml-kernel") return same(profiles::ml_kernel(a.ml_gamma, a.ml_beta, a.ml_c));
  throw UsageError("unknown function '" + a.func + "'");
}

std::vector<Axis> transform_axes(const TransformArgs& a) {
  if (a.dims == 3) return {Axis::x, Axis::y, Axis::t};
  const std::string spec = a.axis.empty() ? (a.dims == 1 ? "t" : "x,t") : a.axis;
  std::vector<Axis> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_axis(item));
    } catch (const DomainError&) {
      throw UsageError("unknown axis '" + item + "'");
    }
  }
  if (static_cast<int>(out.size()) != a.dims) throw UsageError("--axis must name " + std::to_string(a.dims) + " axes");
  if (a.dims == 2 && out[0] == out[1]) throw UsageError("--axis needs two distinct axes");
  return out;
}

int cmd_transform(const TransformArgs& a, const Common& c) {
  const auto field = builtin_field(a).exp_order();
  const auto axes = transform_axes(a);
  const Point3 at = parse_point(a.at);
  if (a.ratios.empty()) throw UsageError("--ratios is required");
  static const char* ratio_name[3] = {"p", "q", "s"};
  std::string out;
  for (std::size_t i = 0; i < axes.size(); ++i) out += std::string(ratio_name[index(axes[i])]) + ",";
  out += "value\n";
  AxisMask mask = 0;
  for (Axis ax : axes) mask |= bit(ax);
  for (const auto& r : a.ratios) {
    const auto v = parse_list(r);
    if (v.size() != axes.size()) throw UsageError("ratio point '" + r + "' needs " + std::to_string(axes.size()) + " values");
    std::array<double, 3> ratios{1.0, 1.0, 1.0};
    for (std::size_t i = 0; i < axes.size(); ++i) ratios[index(axes[i])] = v[i];
    const double value = shehu_partial(field, mask, RatioPoint::from_ratios(ratios[0], ratios[1], ratios[2]), c.quad, at);
    for (double x : v) out += num(x) + ",";
    out += num(value) + "\n";
  }
  emit(c.out, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// invert

struct Pair {
  TransformFn1 F;
  std::function<double(double)> reference;
};

const std::map<std::string, Pair>& builtin_pairs() {
  static const std::map<std::string, Pair> pairs{
      {"one-over-s", {[](Complex s) { return 1.0 / s; }, [](double) { return 1.0; }}},
      {"one-over-s-squared", {[](Complex s) { return 1.0 / (s * s); }, [](double t) { return t; }}},
      {"one-over-s-plus-1", {[](Complex s) { return 1.0 / (s + 1.0); }, [](double t) { return std::exp(-t); }}},
      {"one-over-s2-plus-1", {[](Complex s) { return 1.0 / (s * s + 1.0); }, [](double t) { return std::sin(t); }}},
      {"sqrt-t", {[](Complex s) { return gamma_fn(1.5) / std::pow(s, 1.5); }, [](double t) { return std::sqrt(t); }}},
      {"ml-gamma-0.5",
       {[](Complex s) { return std::pow(s, -0.5) / (std::sqrt(s) + 1.0); },
        [](double t) { return mittag_leffler(MLParams{0.5, 1.0}, -std::sqrt(t)); }}},
  };
  return pairs;
}

struct InvertArgs {
  std::string pair;
  std::string points = "1";
  double tol = 1e-6;
};

int cmd_invert(const InvertArgs& a, const Common& c) {
  const auto& pair = builtin_pairs().at(a.pair);
  const auto cfg = c.inversion();
  std::string out = "t,value,reference,error\n";
  bool ok = true;
  for (double t : parse_list(a.points)) {
    const double v = invert_1d(pair.F, t, cfg);
    const double ref = pair.reference(t);
    const double err = std::abs(v - ref);
    if (!(err <= a.tol)) {
      ok = false;
      std::cerr << "flagged: error " << num(err) << " above " << num(a.tol) << " at t = " << num(t) << "\n";
    }
    out += num(t) + "," + num(v) + "," + num(ref) + "," + num(err) + "\n";
  }
  emit(c.out, out);
  return ok ? kOk : kFail;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite;
  double tol = 1e-6;
  std::string report;
};

int cmd_verify(const VerifyArgs& a, const Common& c) {
  const auto rep = verify_suite(a.suite, a.tol, c.seed);
  emit(a.report.empty() ? c.out : a.report, rep.to_jsonl());
  std::cerr << rep.summary() << "\n";
  return rep.passed() ? kOk : kFail;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string equation;
  std::string mode = "residual";
  double gamma = 1.0, alpha = 0.5, beta = 1.0;
  int count = 20;
  double tol = 1e-10;
  std::vector<std::string> ratios;
  std::string point = "0.5,0.5,0.5";
  int truncation = 8;
  int grid_n = 4;
  double grid_extent = 1.0;
  int fd_n = 31;
  int fd_steps_per_unit = 256;
};

int solve_residual(const SolveArgs& a, const Common& c) {
  const bool heat = a.equation == "heat";
  std::optional<HeatSpec> hs;
  std::optional<TelegraphSpec> ts;
  if (heat) hs = HeatSpec::make(a.gamma);
  else ts = TelegraphSpec::make(a.gamma, a.alpha, a.beta);
  const auto F = heat ? heat_transform_solution(*hs) : telegraph_transform_solution(*ts);

  std::vector<std::array<double, 3>> points;
  if (!a.ratios.empty()) {
    for (const auto& r : a.ratios) {
      const auto p = parse_point(r);
      points.push_back({p[0], p[1], p[2]});
    }
  } else {
    if (a.count < 1) throw UsageError("--count must be positive");
    std::mt19937_64 rng(c.seed);
    for (int i = 0; i < a.count; ++i) {
      const double p = draw(rng, 1.2, 4.0), q = draw(rng, 0.5, 4.0), s = draw(rng, 0.2, 4.0);
      points.push_back({p, q, s});
    }
  }
  std::string out;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [p, q, s] = points[i];
    json j;
    j["index"] = i;
    j["p"] = p;
    j["q"] = q;
    j["s"] = s;
    j["F"] = F(p, q, s);
    const double res = heat ? heat_residual(*hs, F, p, q, s) : telegraph_residual(*ts, F, p, q, s);
    j["residual"] = res;
    j["pass"] = res <= a.tol;
    if (!heat) j["strict_residual_informational"] = telegraph_residual(*ts, F, p, q, s, TelegraphReading::Strict);
    failures += !(res <= a.tol);
    out += j.dump() + "\n";
  }
  emit(c.out, out);
  std::cerr << a.equation << " residual: " << points.size() - failures << "/" << points.size()
            << " within " << num(a.tol) << "\n";
  return failures == 0 ? kOk : kFail;
}

Grid3Spec solve_grid(const SolveArgs& a) {
  if (a.grid_n < 1 || !(a.grid_extent > 0.0)) throw UsageError("grid needs n >= 1 and a positive extent");
  return Grid3Spec::interior({a.grid_extent, a.grid_extent, a.grid_extent}, {a.grid_n, a.grid_n, a.grid_n});
}

int solve_reconstruct(const SolveArgs& a, const Common& c) {
  const auto F = a.equation == "heat" ? heat_transform_solution(HeatSpec::make(a.gamma))
                                      : telegraph_transform_solution(TelegraphSpec::make(a.gamma, a.alpha, a.beta));
  const auto field = reconstruct(F, solve_grid(a), c.inversion());
  emit(c.out, field.to_csv());
  std::cerr << "reconstructed " << field.values.size() << " nodes, " << field.nonfinite() << " non-finite\n";
  return field.nonfinite() == 0 ? kOk : kFail;
}

int solve_series(const SolveArgs& a, const Common& c) {
  const Point3 pt = parse_point(a.point);
  SeriesTruncation tr;
  tr.per_index = a.truncation;
  const auto r = a.equation == "heat"
                     ? series_solution_heat(HeatSpec::make(a.gamma), pt, tr)
                     : series_solution_telegraph(TelegraphSpec::make(a.gamma, a.alpha, a.beta), pt, tr);
  json j;
  j["equation"] = a.equation;
  j["x"] = pt[0];
  j["y"] = pt[1];
  j["t"] = pt[2];
  j["truncation"] = a.truncation;
  j["value"] = r.value;
  j["terms_used"] = r.terms_used;
  j["guarded_count"] = r.guarded_count;
  j["overflow_count"] = r.overflow_count;
  j["experimental"] = r.experimental;
  emit(c.out, j.dump() + "\n");
  return kOk;
}

int solve_compare(const SolveArgs& a, const Common& c) {
  if (a.equation != "heat") throw UsageError("compare mode is available for heat only");
  if (a.fd_n < 2 || a.fd_steps_per_unit < 2) throw UsageError("finite-difference grid too small");
  const Grid3Spec grid = solve_grid(a);
  FDGrid fd;
  fd.nx = fd.ny = a.fd_n;
  fd.dt = 1.0 / a.fd_steps_per_unit;
  fd.nt = static_cast<int>(std::ceil(a.grid_extent * a.fd_steps_per_unit));
  const auto rep = compare_heat_with_oracle(a.gamma, grid, c.inversion(), fd);
  emit(c.out, rep.to_jsonl());
  std::cerr << "max abs deviation " << num(rep.max_abs) << ", max relative " << num(rep.max_rel)
            << (rep.full_agreement() ? " (agreement)" : " (no agreement)") << "\n";
  return rep.nonfinite == 0 ? kOk : kFail;
}

int cmd_solve(const SolveArgs& a, const Common& c) {
  if (a.mode == "residual") return solve_residual(a, c);
  if (a.mode == "reconstruct") return solve_reconstruct(a, c);
  if (a.mode == "series") return solve_series(a, c);
  return solve_compare(a, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shehu transform toolkit"};
  app.set_config("--config", "", "key = value file; [subcommand] sections for subcommand options");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--rel-tol", c.quad.rel_tol, "quadrature relative tolerance")->capture_default_str();
  app.add_option("--abs-tol", c.quad.abs_tol, "quadrature absolute tolerance")->capture_default_str();
  app.add_option("--max-subdivisions", c.quad.max_subdivisions)->capture_default_str();
  app.add_option("--method", c.method, "inversion method")
      ->check(CLI::IsMember({"talbot", "stehfest", "laguerre"}))
      ->capture_default_str();
  app.add_option("--nodes", c.nodes, "inversion nodes per axis")->capture_default_str();
  app.add_option("--contour-scale", c.contour_scale)->capture_default_str();
  app.add_option("--eval-budget", c.eval_budget)->capture_default_str();
  app.add_option("--seed", c.seed)->capture_default_str();
  app.add_option("--out", c.out, "output path (default stdout)");

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "forward transform of a built-in field");
  transform->add_option("--dims", ta.dims)->check(CLI::IsMember({1, 2, 3}))->capture_default_str();
  transform->add_option("--axis", ta.axis, "axis (dims 1) or axis pair x,t (dims 2)");
  transform->add_option("--func", ta.func)
      ->check(CLI::IsMember({"const", "exp-xyt", "sine-product", "power", "ml-kernel"}))
      ->capture_default_str();
  transform->add_option("--ratios", ta.ratios, "ratio points, comma-separated per point");
  transform->add_option("--at", ta.at, "fixed coordinates of untransformed axes")->capture_default_str();
  transform->add_option("--nu", ta.nu, "power exponent")->capture_default_str();
  transform->add_option("--ml-gamma", ta.ml_gamma)->capture_default_str();
  transform->add_option("--ml-beta", ta.ml_beta)->capture_default_str();
  transform->add_option("--ml-c", ta.ml_c)->capture_default_str();

  InvertArgs ia;
  auto* invert = app.add_subcommand("invert", "numerical inversion of a built-in pair");
  std::vector<std::string> pair_ids;
  for (const auto& [k, v] : builtin_pairs()) pair_ids.push_back(k);
  invert->add_option("--pair", ia.pair)->required()->check(CLI::IsMember(pair_ids));
  invert->add_option("--points", ia.points, "comma-separated t values")->capture_default_str();
  invert->add_option("--tol", ia.tol, "error threshold")->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", va.suite)->required();
  verify->add_option("--tol", va.tol)->capture_default_str();
  verify->add_option("--report", va.report, "report path (default --out or stdout)");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "heat / telegraph examples");
  solve->add_option("equation", sa.equation)->required()->check(CLI::IsMember({"heat", "telegraph"}));
  solve->add_option("--mode", sa.mode)
      ->check(CLI::IsMember({"residual", "reconstruct", "series", "compare"}))
      ->capture_default_str();
  solve->add_option("--gamma", sa.gamma)->capture_default_str();
  solve->add_option("--alpha", sa.alpha)->capture_default_str();
  solve->add_option("--beta", sa.beta)->capture_default_str();
  solve->add_option("--count", sa.count, "seeded residual points")->capture_default_str();
  solve->add_option("--tol", sa.tol, "residual threshold")->capture_default_str();
  solve->add_option("--ratios", sa.ratios, "explicit residual points p,q,s");
  solve->add_option("--point", sa.point, "series point x,y,t")->capture_default_str();
  solve->add_option("--truncation", sa.truncation, "series terms per index")->capture_default_str();
  solve->add_option("--grid-n", sa.grid_n, "grid nodes per axis")->capture_default_str();
  solve->add_option("--grid-extent", sa.grid_extent)->capture_default_str();
  solve->add_option("--fd-n", sa.fd_n, "oracle interior nodes per side")->capture_default_str();
  solve->add_option("--fd-steps", sa.fd_steps_per_unit, "oracle time steps per unit time")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    c.quad.validate();
    if (*transform) return cmd_transform(ta, c);
    if (*invert) return cmd_invert(ia, c);
    if (*verify) return cmd_verify(va, c);
    return cmd_solve(sa, c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownSuite& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kFail;
  }
}

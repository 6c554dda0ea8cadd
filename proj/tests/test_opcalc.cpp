#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shehu/opcalc.hpp"
#include "shehu/verify.hpp"
#include "test_util.hpp"

using namespace shehu;
using testutil::rel;

namespace {

SeparableField sep(Profile x, Profile y, Profile t) { return {{x, y, t}}; }

SeparableField exp3() {
  return sep(profiles::exponential(-1), profiles::exponential(-1), profiles::exponential(-1));
}

const RatioPoint kUnit{};

}  // namespace

TEST(IntegralRule, KnownValues) {
  const auto orders = AxisOrders::on(Axis::t, 1.0);
  EXPECT_NEAR(integral_rule(1.0, kUnit, orders), 1.0, 1e-15);
  const auto t = sep(profiles::constant(), profiles::constant(), profiles::monomial(1));
  EXPECT_NEAR(shehu_3d(t.exp_order(), kUnit), 1.0, 1e-10);

  const auto f = exp3();
  const auto half = AxisOrders::on(Axis::t, 0.5);
  EXPECT_NEAR(integral_rule(shehu_3d(f.exp_order(), kUnit), kUnit, half), 0.125, 1e-12);
  SeparableField If = f;
  If.profiles[2] = fractional_integral(f.profiles[2], FracOrder::of(0.5));
  EXPECT_NEAR(shehu_3d(If.exp_order(), kUnit), 0.125, 1e-6);

  EXPECT_EQ(integral_rule(0.37, RatioPoint::from_ratios(2, 3, 4), AxisOrders{}), 0.37);
  EXPECT_EQ(AxisOrders{}.set(Axis::x, 0.0).mask(), 0);
  EXPECT_THROW(AxisOrders{}.set(Axis::x, -1.0), DomainError);
}

TEST(IntegralRule, AllAxesAgainstQuadrature) {
  const auto f = sep(profiles::sine(kPi), profiles::monomial(1), profiles::exponential(-1));
  const RatioPoint r = RatioPoint::from_ratios(1.3, 0.8, 2.1);
  AxisOrders o;
  o.set(Axis::x, 0.3).set(Axis::y, 1.5).set(Axis::t, 0.5);
  SeparableField If = f;
  for (Axis a : kAllAxes) If.profiles[index(a)] = fractional_integral(f.profiles[index(a)], *o[a]);
  const double lhs = shehu_3d(If.exp_order(), r);
  const double rhs = integral_rule(shehu_3d(f.exp_order(), r), r, o);
  EXPECT_LE(rel(lhs, rhs), 1e-8);
  // closed form: pi/(p^2+pi^2) * 1/q^2 * 1/(s+1), times the ratio powers
  const double closed = kPi / (1.69 + kPi * kPi) / 0.64 / 3.1 * std::pow(1.3, -0.3) *
                        std::pow(0.8, -1.5) * std::pow(2.1, -0.5);
  EXPECT_LE(rel(rhs, closed), 1e-10);
}

TEST(CaputoRule, KnownValues) {
  const auto t = sep(profiles::constant(), profiles::constant(), profiles::monomial(1));
  const auto o = AxisOrders::on(Axis::t, 0.5);
  const AxisMask T = bit(Axis::t);
  const auto bnd = compute_boundary(t, o, T, kUnit);
  EXPECT_EQ(bnd.get(T, {0, 0, 0}), 0.0);
  const double rule = caputo_rule(shehu_1d(t.exp_order(), Axis::t, kUnit), kUnit, o, bnd);
  EXPECT_NEAR(rule, 1.0, 1e-12);
  SeparableField Dt = t;
  Dt.profiles[2] = caputo(t.profiles[2], FracOrder::of(0.5));
  EXPECT_NEAR(shehu_1d(Dt.exp_order(), Axis::t, kUnit), 1.0, 1e-9);

  // Constants are annihilated for every ratio.
  const auto one = sep(profiles::constant(), profiles::constant(), profiles::constant());
  for (double s : {0.5, 1.0, 2.7})
    for (double g : {0.2, 0.5, 0.9}) {
      const RatioPoint r = RatioPoint::from_ratios(1, 1, s);
      const auto og = AxisOrders::on(Axis::t, g);
      const double v = caputo_rule(1.0 / s, r, og, compute_boundary(one, og, T, r));
      EXPECT_NEAR(v, 0.0, 1e-15) << s << " " << g;
    }

  // Order 1 is the classical rule s F - f(0).
  const auto e = sep(profiles::constant(), profiles::constant(), profiles::exponential(-1));
  const auto o1 = AxisOrders::on(Axis::t, 1.0);
  const RatioPoint r = RatioPoint::from_ratios(1, 1, 1.7);
  const double F = 1.0 / 2.7;
  EXPECT_NEAR(caputo_rule(F, r, o1, compute_boundary(e, o1, T, r)), 1.7 * F - 1.0, 1e-12);
}

TEST(CaputoRule, MissingBoundary) {
  BoundaryTransforms b;
  AxisOrders o;
  o.set(Axis::t, 1.5);
  b.set(bit(Axis::t), {0, 0, 0}, 1.0);
  EXPECT_THROW(caputo_rule(1.0, kUnit, o, b), MissingBoundary);
  b.set(bit(Axis::t), {0, 0, 1}, 0.0);
  EXPECT_NO_THROW(caputo_rule(1.0, kUnit, o, b));
  EXPECT_EQ(BoundaryTransforms::indices(bit(Axis::t), o).size(), 2u);
}

TEST(CaputoRule, BoundaryIndexRanges) {
  AxisOrders o;
  o.set(Axis::x, 0.4).set(Axis::y, 1.2).set(Axis::t, 2.5);
  EXPECT_EQ(BoundaryTransforms::indices(kAllMask, o).size(), 1u * 2u * 3u);
  EXPECT_EQ(BoundaryTransforms::indices(bit(Axis::y) | bit(Axis::t), o).size(), 6u);
  const auto f = sep(profiles::cosine(1.0), profiles::monomial(2), profiles::exponential(-1));
  const auto b = compute_boundary(f, o, kAllMask, RatioPoint::from_ratios(1.2, 1.5, 0.9));
  // 1 + 2 + 3 faces, 2 + 3 + 6 edges, 6 corners.
  EXPECT_EQ(b.size(), 23u);
  EXPECT_NEAR(b.get(kAllMask, {0, 1, 2}), 0.0, 1e-15);
  EXPECT_NEAR(b.get(kAllMask, {0, 0, 1}), 0.0, 1e-15);  // y^2 at y = 0
  EXPECT_THROW(compute_boundary(f, o, bit(Axis::t), kUnit), DomainError);
}

TEST(CaputoRule, TripleRuleNeedsEdgeTerms) {
  // exp(-(x+y+t)) with all three operators: the tensor rule is exact, the
  // printed three-axis form is not.
  const auto f = exp3();
  AxisOrders o;
  o.set(Axis::x, 0.4).set(Axis::y, 0.7).set(Axis::t, 0.5);
  const RatioPoint r = RatioPoint::from_ratios(1.1, 2.0, 0.8);
  SeparableField Df = f;
  for (Axis a : kAllAxes) Df.profiles[index(a)] = caputo(f.profiles[index(a)], *o[a]);
  const double lhs = shehu_3d(Df.exp_order(), r);
  const auto b = compute_boundary(f, o, kAllMask, r);
  const double F = shehu_3d(f.exp_order(), r);
  // Closed form: prod_a (r^o/(r+1) - r^{o-1}) = prod_a -r^{o-1}/(r+1).
  double closed = 1.0;
  for (Axis a : kAllAxes) closed *= -std::pow(r.ratio(a), o[a]->value - 1.0) / (r.ratio(a) + 1.0);
  EXPECT_LE(rel(caputo_rule(F, r, o, b), closed), 1e-12);
  EXPECT_LE(rel(lhs, closed), 1e-8);
  EXPECT_GT(rel(caputo_rule_printed(F, r, o, b), closed), 1e-2);
}

TEST(CaputoRule, GeneralFieldBoundaryMatchesSeparable) {
  const auto f = sep(profiles::sine(1.0), profiles::exponential(-0.5), profiles::monomial(2));
  AxisOrders o;
  o.set(Axis::x, 1.3).set(Axis::t, 0.6);
  const RatioPoint r = RatioPoint::from_ratios(0.9, 1.4, 1.1);
  const Point3 at{0.0, 0.7, 0.0};
  const AxisMask m = bit(Axis::x) | bit(Axis::t);
  const auto a = compute_boundary(f, o, m, r, at);
  const GrowthBound gb{profiles::monomial(2).M, {0.0, 0.0, profiles::kDefaultSlack}};
  const auto b = compute_boundary(f.smooth(), gb, o, m, r, at);
  ASSERT_EQ(a.size(), b.size());
  for (AxisMask S : {bit(Axis::x), bit(Axis::t), m})
    for (const auto& idx : BoundaryTransforms::indices(S, o))
      EXPECT_NEAR(a.get(S, idx), b.get(S, idx), 1e-9 * std::max(1.0, std::abs(a.get(S, idx))));
}

TEST(CaputoRule, NonSeparableField) {
  // sin(x + y + t) over (x, t) with y fixed; the operator acts on t.
  SmoothFn f;
  f.eval = [](const Point3& p) { return std::sin(p[0] + p[1] + p[2]); };
  f.deriv = [](const MultiIndex& m, const Point3& p) {
    return std::sin(p[0] + p[1] + p[2] + 0.5 * kPi * (m[0] + m[1] + m[2]));
  };
  f.max_order = {4, 4, 4};
  const FracOrder g = FracOrder::of(0.6);
  const Point3 at{0.0, 0.3, 0.0};
  const RatioPoint r = RatioPoint::from_ratios(1.0, 1.0, 1.3);
  ExpOrderFn Df;
  Df.eval = [&](const Point3& p) { return caputo_derivative(f, Axis::t, g, p); };
  Df.bound = {profiles::power_bound(0.4, 0.1) * rgamma(1.4), {0.0, 0.0, 0.1}};
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-9;
  const AxisMask m = bit(Axis::x) | bit(Axis::t);
  const double lhs = shehu_partial(Df, m, r, cfg, at);
  ExpOrderFn F;
  F.eval = f.eval;
  F.bound = {1.0, {0.0, 0.0, 0.0}};
  const double Fhat = shehu_partial(F, m, r, cfg, at);
  const auto o = AxisOrders::on(Axis::t, 0.6);
  const auto b = compute_boundary(f, F.bound, o, m, r, at, cfg);
  EXPECT_LE(rel(lhs, caputo_rule(Fhat, r, o, b)), 1e-6);
}

TEST(Convolution, KnownValues) {
  ExpOrderFn one;
  one.eval = [](const Point3&) { return 1.0; };
  EXPECT_NEAR(convolve_3d(one, one, {1, 1, 1}), 1.0, 1e-14);
  EXPECT_NEAR(convolve_3d(one, one, {0.5, 2, 3}), 3.0, 1e-13);
  EXPECT_EQ(convolve_3d(one, one, {0, 2, 3}), 0.0);
  EXPECT_THROW(convolve_3d(one, one, {-1, 2, 3}), DomainError);

  ExpOrderFn ex, et;
  ex.eval = [](const Point3& p) { return std::exp(-p[0]); };
  et.eval = [](const Point3& p) { return std::exp(-p[2]); };
  const double a = convolve_3d(ex, et, {1, 1, 1}), b = convolve_3d(et, ex, {1, 1, 1});
  EXPECT_NEAR(a, b, 1e-9);
  // int e^{-(1-z1)} dz1 * 1 * int e^{-z3} dz3 = (1 - e^{-1})^2
  EXPECT_NEAR(a, std::pow(1.0 - std::exp(-1.0), 2), 1e-12);

  const auto e = exp3().exp_order();
  const double h = shehu_3d(convolution_field(e, e), kUnit);
  EXPECT_NEAR(h, 0.015625, 1e-6);
  EXPECT_NEAR(h, shehu_3d(e, kUnit) * shehu_3d(e, kUnit), 1e-10);
}

TEST(Convolution, FactoredMatchesNested) {
  const auto f = sep(profiles::sine(2.0), profiles::monomial(1), profiles::exponential(-0.5)).exp_order();
  const auto g = exp3().exp_order();
  ExpOrderFn fn = f, gn = g;
  fn.factors.reset();
  gn.factors.reset();
  for (Point3 p : {Point3{0.4, 1.0, 0.7}, Point3{1.5, 0.3, 2.0}})
    EXPECT_LE(rel(convolve_3d(f, g, p), convolve_3d(fn, gn, p)), 1e-9);
  const auto h = convolution_field(f, g);
  EXPECT_LE(h.certificate_ratio(6.0, 5), 1.0);
}

TEST(Convolution, ProductLaw) {
  const auto f = sep(profiles::sine(kPi), profiles::monomial(1), profiles::exponential(-1)).exp_order();
  const auto g = exp3().exp_order();
  const auto h = convolution_field(f, g);
  for (const auto& r : {RatioPoint::from_ratios(1, 1, 1), RatioPoint::from_ratios(0.7, 2.2, 1.4)})
    EXPECT_LE(rel(shehu_3d(h, r), shehu_3d(f, r) * shehu_3d(g, r)), 1e-8);
}

TEST(VerifySuite, IntegralSuite) {
  const auto rep = verify_suite("operational-integrals", 1e-6, 42);
  EXPECT_GE(rep.checked(), 24u);
  EXPECT_TRUE(rep.passed()) << rep.summary();
  std::set<std::string> ids;
  for (const auto& r : rep.rows) ids.insert(r.id);
  EXPECT_EQ(ids.size(), rep.rows.size());
}

TEST(VerifySuite, AllSuitesPass) {
  for (const auto& s : suite_ids()) {
    const auto rep = verify_suite(s, 1e-6, 7);
    EXPECT_TRUE(rep.passed()) << rep.summary();
  }
  EXPECT_GE(verify_suite("operational-derivatives", 1e-5, 3).checked(), 16u);
}

TEST(VerifySuite, UnattainableTolerance) {
  const auto rep = verify_suite("operational-integrals", 1e-30, 42);
  EXPECT_FALSE(rep.passed());
  EXPECT_GT(rep.failures(), 0u);
  for (const auto& r : rep.rows) EXPECT_EQ(r.pass, r.rel_err <= 1e-30);
  EXPECT_FALSE(verify_suite("convolution", 1e-30, 1).passed());
}

TEST(VerifySuite, SerializationAndOrder) {
  const auto rep = verify_suite("ml-kernel", 1e-6, 42);
  std::istringstream in(rep.to_jsonl());
  std::string line, prev;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* k : {"id", "lhs", "rhs", "rel_err", "pass"}) EXPECT_TRUE(j.contains(k)) << k;
    const auto id = j["id"].get<std::string>();
    EXPECT_LE(prev, id);
    prev = id;
    EXPECT_EQ(j["lhs"].get<double>(), rep.rows[n].lhs);
    ++n;
  }
  EXPECT_EQ(n, rep.rows.size());
  EXPECT_GE(n, 12u);
}

TEST(VerifySuite, DeterministicAndInformational) {
  const auto a = verify_suite("operational-derivatives", 1e-6, 11);
  const auto b = verify_suite("operational-derivatives", 1e-6, 11);
  EXPECT_EQ(a.to_jsonl(), b.to_jsonl());
  EXPECT_NE(a.to_jsonl(), verify_suite("operational-derivatives", 1e-6, 12).to_jsonl());
  std::size_t info = 0, info_fail = 0;
  for (const auto& r : a.rows)
    if (r.informational) {
      ++info;
      info_fail += !r.pass;
    }
  EXPECT_GT(info, 0u);
  EXPECT_GT(info_fail, 0u);  // printed multi-axis forms disagree
  EXPECT_TRUE(a.passed());
}

TEST(VerifySuite, UnknownSuite) {
  EXPECT_THROW(verify_suite("bogus", 1e-6, 1), UnknownSuite);
  EXPECT_THROW(verify_suite("roundtrip", -1.0, 1), DomainError);
}

TEST(VerifySuite, RelativeErrorScale) {
  VerificationReport rep{"x", 1e-6, 0, {}};
  rep.add("a", 0.0, 1e-12, 1.0);
  rep.add("b", 1.0, 1.0);
  rep.add("c", NAN, 1.0);
  EXPECT_TRUE(rep.rows[0].pass);
  EXPECT_EQ(rep.rows[1].rel_err, 0.0);
  EXPECT_FALSE(rep.rows[2].pass);
  EXPECT_NE(rep.to_jsonl().find("\"inf\""), std::string::npos);
}

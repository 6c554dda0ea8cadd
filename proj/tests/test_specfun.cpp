#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shehu/specfun.hpp"

using namespace shehu;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(Gamma, KnownValues) {
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(kPi), 1e-13 * std::sqrt(kPi));
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 24e-13);
  EXPECT_NEAR(gamma_fn(2.5), 1.3293403881791355, 1e-13 * 1.33);
}

TEST(Gamma, ComplexMatchesReal) {
  for (double x : {0.5, 1.7, 3.25, 10.0, 30.5, -0.5, -2.5}) {
    const Complex g = gamma_fn(Complex{x, 0.0});
    EXPECT_LE(rel(g.real(), std::tgamma(x)), 1e-13) << x;
  }
  // Off-axis: Gamma(1 + i) = 0.4980156681 - 0.1549498283 i.
  const Complex g = gamma_fn(Complex{1.0, 1.0});
  EXPECT_NEAR(g.real(), 0.49801566811835604, 1e-13);
  EXPECT_NEAR(g.imag(), -0.15494982830181069, 1e-13);
}

TEST(Gamma, PolesRaise) {
  EXPECT_THROW(gamma_fn(0.0), PoleError);
  EXPECT_THROW(gamma_fn(-1.0), PoleError);
  EXPECT_THROW(gamma_fn(-3.0 + 1e-13), PoleError);
  EXPECT_THROW(gamma_fn(Complex{-2.0, 0.0}), PoleError);
  EXPECT_NO_THROW(gamma_fn(-3.0 + 1e-6));
  EXPECT_EQ(rgamma(-1.0), 0.0);
}

TEST(Gamma, RecurrenceRandom) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const double z = uniform(rng, 0.1, 30.0);
    EXPECT_LE(rel(gamma_fn(z + 1.0), z * gamma_fn(z)), 1e-12) << z;
    const Complex w{z, uniform(rng, -3.0, 3.0)};
    const Complex lhs = gamma_fn(w + 1.0), rhs = w * gamma_fn(w);
    EXPECT_LE(std::abs(lhs - rhs) / std::abs(lhs), 1e-12) << w;
  }
}

TEST(MittagLeffler, KnownValues) {
  EXPECT_NEAR(mittag_leffler({1, 1}, 1.0), std::exp(1.0), 1e-12);
  EXPECT_NEAR(mittag_leffler({0.7, 1.3}, 0.0), 1.0 / std::tgamma(1.3), 1e-14);
  EXPECT_NEAR(mittag_leffler({0.7, 1.3}, 0.0), 1.1142425085, 1e-10);
  // E_{1/2,1}(z) = exp(z^2) erfc(-z).
  EXPECT_NEAR(mittag_leffler({0.5, 1}, -1.0), std::exp(1.0) * std::erfc(1.0), 1e-13);
  EXPECT_NEAR(mittag_leffler({0.5, 1}, -1.0), 0.4275836, 1e-7);
}

TEST(MittagLeffler, HalfOrderAgainstErfc) {
  // erfc closed form is an independent oracle across all three regimes.
  for (double x = -50.0; x <= 3.0; x += 0.25) {
    // long double keeps exp(x^2) and erfc(-x) in range down to x = -50.
    const long double xl = x;
    const double ref = static_cast<double>(std::exp(xl * xl) * std::erfc(-xl));
    EXPECT_NEAR(mittag_leffler({0.5, 1}, x), ref, 1e-10 * std::max(1.0, ref)) << x;
  }
}

TEST(MittagLeffler, ExponentialCase) {
  for (double x = -50.0; x <= 10.0; x += 0.5) {
    const double ref = std::exp(x);
    EXPECT_NEAR(mittag_leffler({1, 1}, x), ref, 1e-10 * std::max(1.0, ref)) << x;
  }
}

TEST(MittagLeffler, CoshCase) {
  for (double x = 0.0; x <= 9.0; x += 0.25)
    EXPECT_NEAR(mittag_leffler({2, 1}, x), std::cosh(std::sqrt(x)), 1e-10 * std::cosh(3.0)) << x;
}

TEST(MittagLeffler, Recurrence) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const double g = uniform(rng, 0.2, 1.0), b = uniform(rng, 0.05, 2.0);
    const double r = uniform(rng, 0.0, 2.0), th = uniform(rng, -kPi, kPi);
    const Complex z = std::polar(r, th);
    const Complex lhs = mittag_leffler({g, b}, z);
    const Complex rhs = z * mittag_leffler({g, b + g}, z) + rgamma(b);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(lhs))) << g << " " << b << " " << z;
  }
}

TEST(MittagLeffler, ContinuityAcrossRegimes) {
  // No jumps at the series / contour / asymptotic switch-over points.
  for (double g : {0.3, 0.6, 0.9}) {
    for (double x : {-5.0, -10.0, -12.0, -20.0}) {
      const double a = mittag_leffler({g, 1}, x - 1e-11), b = mittag_leffler({g, 1}, x + 1e-11);
      EXPECT_NEAR(a, b, 1e-10) << g << " " << x;
    }
  }
}

TEST(MittagLeffler, InvalidParams) {
  EXPECT_THROW(mittag_leffler({0.0, 1.0}, 1.0), DomainError);
  EXPECT_THROW(mittag_leffler({1.0, -1.0}, 1.0), DomainError);
}

TEST(WrightSeries, Exponential) {
  const auto r = wright_series({{{1, 1}}, {{1, 1}}}, Complex{1.0, 0.0});
  EXPECT_NEAR(r.value.real(), std::exp(1.0), 1e-13);
  EXPECT_EQ(r.guarded_count, 0);
  EXPECT_TRUE(r.converged);
}

TEST(WrightSeries, ReducesToMittagLeffler) {
  const auto r = wright_series({{{1, 1}}, {{1.0, 0.8}}}, Complex{0.5, 0.0});
  EXPECT_NEAR(r.value.real(), mittag_leffler({0.8, 1.0}, 0.5), 1e-13);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const double g = uniform(rng, 0.5, 1.0), b = uniform(rng, 0.5, 2.0);
    const Complex z = std::polar(uniform(rng, 0.0, 2.0), uniform(rng, -kPi, kPi));
    const auto w = wright_series({{{1, 1}}, {{b, g}}}, z);
    EXPECT_LE(std::abs(w.value - mittag_leffler({g, b}, z)), 1e-10) << g << " " << b << " " << z;
  }
}

TEST(WrightSeries, PoleGuardCountsEveryTerm) {
  const auto r = wright_series({{{1, 1}}, {{-1.0, 0.0}}}, Complex{0.3, 0.0}, 50);
  EXPECT_EQ(r.guarded_count, 50);
  EXPECT_EQ(r.terms_summed, 0);
  EXPECT_EQ(r.value, Complex(0.0, 0.0));
}

TEST(WrightSeries, DivergentSeriesRaises) {
  // sum Gamma(1 + 2s) / s! sigma^s has zero radius of convergence.
  EXPECT_THROW(wright_series({{{1, 2}}, {}}, Complex{1.0, 0.0}), DivergenceError);
}

TEST(WrightSeries, InvalidSpec) {
  EXPECT_THROW(wright_series({{{1, -1}}, {}}, Complex{1.0, 0.0}), DomainError);
}

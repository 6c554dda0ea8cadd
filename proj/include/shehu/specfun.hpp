#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "shehu/contour.hpp"
#include "shehu/errors.hpp"
#include "shehu/types.hpp"

namespace shehu {

// Distance below which an argument counts as a gamma pole.
inline constexpr double kPoleTol = 1e-12;

inline bool is_nonpositive_integer(double x, double tol = kPoleTol) {
  if (x > tol) return false;
  return std::abs(x - std::round(x)) <= tol;
}

inline bool is_gamma_pole(Complex z, double tol = kPoleTol) {
  return std::abs(z.imag()) <= tol && is_nonpositive_integer(z.real(), tol);
}

namespace detail {

inline Complex lanczos_gamma(Complex z) {
  static constexpr double g = 7.0;
  static constexpr double c[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    return kPi / (std::sin(kPi * z) * lanczos_gamma(1.0 - z));
  }
  z -= 1.0;
  Complex x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  const Complex tt = z + g + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(tt, z + 0.5) * std::exp(-tt) * x;
}

}  // namespace detail

// Gamma function. Real arguments go through the C library; complex ones
// through a Lanczos approximation with reflection for Re z < 1/2.
inline double gamma_fn(double x) {
  if (is_nonpositive_integer(x))
    throw PoleError("gamma pole at " + std::to_string(x));
  return std::tgamma(x);
}

inline Complex gamma_fn(Complex z) {
  if (is_gamma_pole(z))
    throw PoleError("gamma pole at " + std::to_string(z.real()));
  if (z.imag() == 0.0) return std::tgamma(z.real());
  return detail::lanczos_gamma(z);
}

// log|Gamma(x)| and sign(Gamma(x)) without touching the global `signgam`.
struct LogGamma {
  double log_abs;
  int sign;
};

inline LogGamma log_gamma(double x) {
  if (is_nonpositive_integer(x))
    throw PoleError("gamma pole at " + std::to_string(x));
#if defined(__GLIBC__)
  int sg = 1;
  const double v = ::lgamma_r(x, &sg);
  return {v, sg};
#else
  const int sg = (x > 0 || static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
  return {std::lgamma(x), sg};
#endif
}

// 1/Gamma(x), entire; exactly zero on the poles.
inline double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x < 170.0 && x > -170.0) return 1.0 / std::tgamma(x);
  const auto lg = log_gamma(x);
  return lg.sign * std::exp(-lg.log_abs);
}

// ---------------------------------------------------------------------------
// Two-parameter Mittag-Leffler function E_{gamma,beta}(z) = sum z^r / Gamma(gamma r + beta).

struct MLParams {
  double gamma = 1.0;
  double beta = 1.0;

  void validate() const {
    if (!(gamma > 0.0) || !(beta > 0.0))
      throw DomainError("Mittag-Leffler parameters must satisfy gamma > 0, beta > 0");
  }
};

namespace detail {

// Power series summed in long double. Gives up (nullopt) when the estimated
// cancellation error exceeds ~1e-12 or the series converges too slowly.
inline std::optional<Complex> ml_series(const MLParams& p, Complex z) {
  using LD = long double;
  using CLD = std::complex<LD>;
  const CLD zl{static_cast<LD>(z.real()), static_cast<LD>(z.imag())};
  const double log_abs_z = std::log(std::abs(z));
  const double arg_z = std::arg(z);

  CLD sum{0, 0};
  CLD zr{1, 0};
  LD abs_sum = 0;
  double prev_mag = HUGE_VAL;
  for (int r = 0; r < 20000; ++r) {
    const double arg = p.gamma * r + p.beta;
    CLD term;
    if (arg < 160.0) {
      term = zr * static_cast<LD>(rgamma(arg));
      zr *= zl;
    } else {
      const auto lg = log_gamma(arg);
      const double logmag = r * log_abs_z - lg.log_abs;
      const LD mag = std::exp(static_cast<LD>(logmag));
      term = std::polar(mag, static_cast<LD>(r * arg_z));
    }
    sum += term;
    const double mag = static_cast<double>(std::abs(term));
    abs_sum += mag;
    if (!std::isfinite(static_cast<double>(abs_sum))) return std::nullopt;
    const double s = static_cast<double>(std::abs(sum));
    if (r > 2 && mag <= prev_mag && mag <= 1e-18 * s) {
      // Each term carries ~1 ulp from rgamma; the sum inherits that of sum |term|.
      const double cancel = 2e-16 * static_cast<double>(abs_sum);
      if (cancel > 1e-12 * std::max(1.0, s)) return std::nullopt;
      return Complex{static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
    }
    if (mag == 0.0 && r > 2 && s == 0.0) return Complex{0.0, 0.0};
    prev_mag = mag;
  }
  return std::nullopt;
}

// Algebraic asymptotic expansion for large negative real z and gamma < 1,
// truncated at its smallest term; accepted only when that term is tiny.
inline std::optional<double> ml_asymptotic(const MLParams& p, double z) {
  double sum = 0.0;
  double zr = 1.0;
  double last_mag = HUGE_VAL;
  for (int r = 1; r < 400; ++r) {
    zr /= z;
    const double term = -zr * rgamma(p.beta - p.gamma * r);
    const double mag = std::abs(term);
    if (mag == 0.0) continue;
    if (mag > last_mag) break;
    sum += term;
    last_mag = mag;
    if (mag <= 1e-17 * std::abs(sum)) break;
  }
  if (last_mag <= 1e-15 * std::abs(sum)) return sum;
  return std::nullopt;
}

// Inverse Laplace representation E_{g,b}(z) = L^{-1}[s^{g-b} / (s^g - z)](1)
// on a Talbot contour. Simple poles s_k of the kernel on the principal sheet
// are subtracted as R_k / (s - s_k) and restored exactly as R_k e^{s_k}, so
// the contour never needs to avoid them.
inline Complex ml_contour(const MLParams& p, Complex z) {
  const double g = p.gamma, b = p.beta;
  std::vector<Complex> poles, residues;
  const double rz = std::abs(z);
  const double az = std::arg(z);
  const int kmax = static_cast<int>(std::ceil(g)) + 1;
  for (int k = -kmax; k <= kmax; ++k) {
    const double phase = az + 2.0 * kPi * k;
    if (std::abs(phase) < g * kPi * (1.0 - 1e-12) && std::abs(phase / g) < kPi) {
      const Complex sk = std::polar(std::pow(rz, 1.0 / g), phase / g);
      if (sk.real() > 700.0) throw ConvergenceError("Mittag-Leffler value overflows");
      poles.push_back(sk);
      residues.push_back((1.0 / g) * std::pow(sk, 1.0 - b));
    }
  }

  auto evaluate = [&](int n) {
    const TalbotContour c{n, 1.0, 1.0};
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < poles.size(); ++k) sum += residues[k] * std::exp(poles[k]);
    for (const auto& node : c.nodes()) {
      Complex F = std::pow(node.s, g - b) / (std::pow(node.s, g) - z);
      for (std::size_t k = 0; k < poles.size(); ++k) F -= residues[k] / (node.s - poles[k]);
      sum += node.weight * F;
    }
    return sum;
  };

  const Complex v1 = evaluate(40), v2 = evaluate(56);
  if (!std::isfinite(v2.real()) || !std::isfinite(v2.imag()))
    throw ConvergenceError("Mittag-Leffler contour evaluation overflowed");
  const double spread = std::abs(v1 - v2) / std::max(1.0, std::abs(v2));
  if (spread > 1e-10)
    throw ConvergenceError("Mittag-Leffler contour evaluation did not settle (spread " +
                           std::to_string(spread) + ")");
  return v2;
}

}  // namespace detail

// E_{gamma,beta}(z). Regimes: long-double power series where cancellation
// is benign, the algebraic asymptotic expansion on the far negative real
// axis (gamma < 1), and a contour-integral representation elsewhere.
inline Complex mittag_leffler(const MLParams& p, Complex z) {
  p.validate();
  if (z == Complex{0.0, 0.0}) return rgamma(p.beta);
  if (auto s = detail::ml_series(p, z)) return *s;
  if (z.imag() == 0.0 && z.real() <= -10.0 && p.gamma < 1.0) {
    if (auto a = detail::ml_asymptotic(p, z.real())) return *a;
  }
  const Complex v = detail::ml_contour(p, z);
  // Real arguments give real values; drop contour roundoff in Im.
  if (z.imag() == 0.0) return {v.real(), 0.0};
  return v;
}

inline double mittag_leffler(const MLParams& p, double z) {
  return mittag_leffler(p, Complex{z, 0.0}).real();
}

// ---------------------------------------------------------------------------
// Generalized Wright series
//   sum_s prod Gamma(a_j + A_j s) / (s! prod Gamma(b_j + B_j s)) * sigma^s.

struct WrightParam {
  double shift;  // a_j or b_j
  double slope;  // A_j or B_j, >= 0
};

struct WrightSeriesSpec {
  std::vector<WrightParam> upper;
  std::vector<WrightParam> lower;

  void validate() const {
    for (const auto& u : upper)
      if (u.slope < 0) throw DomainError("Wright upper slopes must be >= 0");
    for (const auto& l : lower)
      if (l.slope < 0) throw DomainError("Wright lower slopes must be >= 0");
  }
};

struct WrightSeriesResult {
  Complex value;
  int terms_summed = 0;
  int guarded_count = 0;  // terms skipped because a gamma argument is a pole
  bool converged = false;
};

inline WrightSeriesResult wright_series(const WrightSeriesSpec& spec, Complex sigma,
                                        int max_terms = 2000) {
  spec.validate();
  if (max_terms < 1) throw DomainError("max_terms must be >= 1");
  using LD = long double;
  // Growth exponent: terms decay super-geometrically iff 1 + sum B - sum A > 0.
  double delta = 1.0;
  for (const auto& l : spec.lower) delta += l.slope;
  for (const auto& u : spec.upper) delta -= u.slope;
  const bool entire = delta > 1e-12;

  WrightSeriesResult out;
  std::complex<LD> sum{0, 0};
  const double log_abs_sigma = std::log(std::abs(sigma));
  const double arg_sigma = std::arg(sigma);
  double prev_mag = -1.0;
  int growth_run = 0;
  for (int s = 0; s < max_terms; ++s) {
    double log_mag = 0.0;
    int sign = 1;
    bool guarded = false;
    for (const auto& u : spec.upper) {
      const double arg = u.shift + u.slope * s;
      if (is_nonpositive_integer(arg)) { guarded = true; break; }
      const auto lg = log_gamma(arg);
      log_mag += lg.log_abs;
      sign *= lg.sign;
    }
    if (!guarded) {
      for (const auto& l : spec.lower) {
        const double arg = l.shift + l.slope * s;
        if (is_nonpositive_integer(arg)) { guarded = true; break; }
        const auto lg = log_gamma(arg);
        log_mag -= lg.log_abs;
        sign *= lg.sign;
      }
    }
    if (guarded) {
      ++out.guarded_count;
      continue;
    }
    log_mag -= std::lgamma(s + 1.0);
    std::complex<LD> term;
    double mag;
    if (sigma == Complex{0.0, 0.0}) {
      mag = (s == 0) ? std::exp(log_mag) : 0.0;
      term = {static_cast<LD>(sign * mag), 0};
    } else {
      log_mag += s * log_abs_sigma;
      mag = std::exp(log_mag);
      term = std::polar(static_cast<LD>(mag), static_cast<LD>(s * arg_sigma)) *
             static_cast<LD>(sign);
    }
    sum += term;
    ++out.terms_summed;
    if (!std::isfinite(mag))
      throw DivergenceError("Wright series term overflowed at index " + std::to_string(s));
    if (!entire) {
      growth_run = (prev_mag >= 0.0 && mag > prev_mag) ? growth_run + 1 : 0;
      if (growth_run >= 10)
        throw DivergenceError("Wright series terms grew for 10 consecutive indices");
    }
    const double total = static_cast<double>(std::abs(sum));
    if (s > 0 && mag <= 1e-16 * total && (prev_mag < 0.0 || mag <= prev_mag)) {
      out.converged = true;
      prev_mag = mag;
      break;
    }
    if (mag == 0.0 && s > 0 && total == 0.0) {
      out.converged = true;
      break;
    }
    prev_mag = mag;
  }
  out.value = {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
  return out;
}

}  // namespace shehu

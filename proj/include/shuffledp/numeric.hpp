// Copyright 2026 The shuffledp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHUFFLEDP_NUMERIC_HPP_
#define SHUFFLEDP_NUMERIC_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace shuffledp {

// Raised when a requested privacy configuration cannot be certified
// (e.g. no parameter value satisfies the target budget, or a bound's
// validity conditions are violated).
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Compensated accumulator. Neumaier variant: also tracks the case where
// the addend dominates the running sum.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double clamp01(double v) {
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Standard normal density.
inline double normal_pdf(double x) {
  static const double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

// Inverse of the standard normal CDF. Acklam's rational approximation
// refined with one Halley step, accurate to full double precision for
// p in (0, 1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("normal_quantile: p must be in [0, 1]");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement against erfc-based CDF.
  const double e = normal_cdf(x) - p;
  const double u = e / normal_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

// log C(n, m) via lgamma.
inline double log_binomial_coefficient(std::int64_t n, std::int64_t m) {
  if (m < 0 || m > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(m) + 1.0) -
         std::lgamma(static_cast<double>(n - m) + 1.0);
}

// log of the Binomial(n, p) pmf at m.
inline double log_binomial_pmf(std::int64_t n, double p, std::int64_t m) {
  if (m < 0 || m > n) return -std::numeric_limits<double>::infinity();
  if (p <= 0.0) return m == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return m == n ? 0.0 : -std::numeric_limits<double>::infinity();
  return log_binomial_coefficient(n, m) + static_cast<double>(m) * std::log(p) +
         static_cast<double>(n - m) * std::log1p(-p);
}

// phi(u) = (1+u) log(1+u) - u, the exponent shape of Bennett's inequality.
inline double bennett_phi(double u) {
  return (1.0 + u) * std::log1p(u) - u;
}

// Composite Simpson quadrature with a fixed even panel count.
template <class F>
double simpson(F&& f, double lo, double hi, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / panels;
  KahanSum acc;
  acc.add(f(lo));
  acc.add(f(hi));
  for (int i = 1; i < panels; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    acc.add(w * f(lo + i * h));
  }
  return acc.value() * h / 3.0;
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_NUMERIC_HPP_

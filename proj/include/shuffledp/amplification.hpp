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

#ifndef SHUFFLEDP_AMPLIFICATION_HPP_
#define SHUFFLEDP_AMPLIFICATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "shuffledp/blanket.hpp"
#include "shuffledp/numeric.hpp"

namespace shuffledp {

// Certified delta(eps) bounds for the shuffled mechanism S o R^n, built from
// a BlanketProfile through the binomial mixture over the number of users who
// sample from the blanket, plus numeric calibration of eps and eps0.

// Target central privacy pair.
struct PrivacyBudget {
  double epsilon;
  double delta;
};

inline void validate_budget(const PrivacyBudget& b) {
  if (!(b.epsilon > 0.0))
    throw std::invalid_argument("PrivacyBudget: epsilon must be > 0");
  if (!(b.delta > 0.0 && b.delta <= 1.0))
    throw std::invalid_argument("PrivacyBudget: delta must be in (0, 1]");
}

// Upper bound on E[sum_{i=1}^m L_i]_+ for i.i.d. L_i with mean -a and range
// b = b_plus - b_minus, via Hoeffding's inequality. When b_plus is supplied
// the bound is additionally capped at the sure upper limit m * b_plus and
// short-circuits to 0 when L can never be positive.
inline double hoeffding_clipped_expectation(
    std::int64_t m, double a, double b,
    double b_plus = std::numeric_limits<double>::infinity()) {
  if (m < 1) throw std::invalid_argument("hoeffding_clipped_expectation: m >= 1");
  if (!(a > 0.0))
    throw std::invalid_argument("hoeffding_clipped_expectation: requires a > 0");
  if (!(b >= 0.0))
    throw std::invalid_argument("hoeffding_clipped_expectation: requires b >= 0");
  if (b_plus <= 0.0) return 0.0;
  if (b == 0.0) return 0.0;
  const double raw =
      (b * b / (4.0 * a)) * std::exp(-2.0 * static_cast<double>(m) * a * a / (b * b));
  return std::min(raw, static_cast<double>(m) * b_plus);
}

// Same quantity via Bennett's inequality, using the second-moment bound c2.
inline double bennett_clipped_expectation(std::int64_t m, double a,
                                          double b_plus, double c2) {
  if (m < 1) throw std::invalid_argument("bennett_clipped_expectation: m >= 1");
  if (!(a > 0.0))
    throw std::invalid_argument("bennett_clipped_expectation: requires a > 0");
  if (!(c2 > 0.0))
    throw std::invalid_argument("bennett_clipped_expectation: requires c2 > 0");
  if (b_plus <= 0.0) return 0.0;
  const double u = a * b_plus / c2;
  const double kappa = (c2 / (b_plus * b_plus)) * bennett_phi(u);
  const double raw = b_plus /
                     (a * static_cast<double>(m) * std::log1p(u)) *
                     std::exp(-kappa * static_cast<double>(m));
  return std::min(raw, static_cast<double>(m) * b_plus);
}

// Binomial mixture over the blanket-sample count m: the bound of the form
// (1/(gamma n)) sum_m C(n,m) gamma^m (1-gamma)^{n-m} per_m(m), where per_m
// upper-bounds E[sum_1^m L_i]_+. Exact O(n) evaluation with log-space
// weights; clamped to [0, 1].
template <class PerM>
double delta_mixture(std::int64_t n, double gamma, PerM&& per_m) {
  if (n < 1) throw std::invalid_argument("delta_mixture: n must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("delta_mixture: gamma must be in (0, 1]");
  if (gamma == 1.0)
    return clamp01(per_m(n) / (gamma * static_cast<double>(n)));
  KahanSum acc;
  for (std::int64_t m = 1; m <= n; ++m) {
    const double w = std::exp(log_binomial_pmf(n, gamma, m));
    if (w == 0.0) continue;
    acc.add(w * per_m(m));
  }
  return clamp01(acc.value() / (gamma * static_cast<double>(n)));
}

namespace detail {

// Per-m bound families used by the method-level deltas. raw() is the bare
// concentration formula, nonincreasing in m, so it can bound window tails;
// operator() applies the m*b_plus cap.
struct HoeffdingPerM {
  double scale;   // b^2 / 4a
  double rate;    // 2 a^2 / b^2
  double b_plus;
  double raw(std::int64_t m) const {
    return scale * std::exp(-rate * static_cast<double>(m));
  }
  double operator()(std::int64_t m) const {
    return std::min(raw(m), static_cast<double>(m) * b_plus);
  }
};

struct BennettPerM {
  double scale;   // b_plus / (a log(1 + u))
  double rate;    // (c2 / b_plus^2) phi(u)
  double b_plus;
  double raw(std::int64_t m) const {
    return scale / static_cast<double>(m) * std::exp(-rate * static_cast<double>(m));
  }
  double operator()(std::int64_t m) const {
    return std::min(raw(m), static_cast<double>(m) * b_plus);
  }
};

inline HoeffdingPerM make_hoeffding_per_m(const BlanketProfile& p) {
  const double b = p.range();
  return HoeffdingPerM{b * b / (4.0 * p.a), 2.0 * p.a * p.a / (b * b), p.b_plus};
}

inline BennettPerM make_bennett_per_m(const BlanketProfile& p) {
  const double u = p.a * p.b_plus / p.c2;
  return BennettPerM{p.b_plus / (p.a * std::log1p(u)),
                     (p.c2 / (p.b_plus * p.b_plus)) * bennett_phi(u), p.b_plus};
}

// n at or below which the mixture is summed exactly; above it only a
// central window is summed and the tails are bounded.
constexpr std::int64_t kExactMixtureLimit = 100000;

// Binomial weights C(n,m) gamma^m (1-gamma)^{n-m} for m = 1..n.
inline std::vector<double> binomial_weights(std::int64_t n, double gamma) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (std::int64_t m = 1; m <= n; ++m)
    w[static_cast<std::size_t>(m - 1)] = std::exp(log_binomial_pmf(n, gamma, m));
  return w;
}

template <class PerM>
double mixture_sum_exact(std::int64_t n, double gamma, const PerM& per_m) {
  KahanSum acc;
  for (std::int64_t m = 1; m <= n; ++m) {
    const double w = std::exp(log_binomial_pmf(n, gamma, m));
    if (w == 0.0) continue;
    acc.add(w * per_m(m));
  }
  return acc.value();
}

// Windowed evaluation for large n: sum the weights within
// nγ ± max(16σ, 64) exactly and bound each tail by a Bernstein mass bound
// times the (nonincreasing) raw per-m value at the tail's inner edge. The
// tail mass at this width is below e^{-54}, invisible at 1e-12 precision.
template <class PerM>
double mixture_sum_windowed(std::int64_t n, double gamma, const PerM& per_m) {
  const double nd = static_cast<double>(n);
  const double mu = nd * gamma;
  const double var = nd * gamma * (1.0 - gamma);
  const double sigma = std::sqrt(var);
  const double half = std::max(16.0 * sigma, 64.0);
  const std::int64_t lo =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(mu - half)));
  const std::int64_t hi =
      std::min<std::int64_t>(n, static_cast<std::int64_t>(std::ceil(mu + half)));
  KahanSum acc;
  for (std::int64_t m = lo; m <= hi; ++m) {
    const double w = std::exp(log_binomial_pmf(n, gamma, m));
    if (w == 0.0) continue;
    acc.add(w * per_m(m));
  }
  if (lo > 1) {
    const double t = mu - static_cast<double>(lo - 1);
    const double mass = std::exp(-t * t / (2.0 * (var + t / 3.0)));
    acc.add(mass * per_m.raw(1));
  }
  if (hi < n) {
    const double t = static_cast<double>(hi + 1) - mu;
    const double mass = std::exp(-t * t / (2.0 * (var + t / 3.0)));
    acc.add(mass * per_m.raw(hi));
  }
  return acc.value();
}

template <class PerM>
double mixture_delta_from_per_m(std::int64_t n, double gamma, const PerM& per_m) {
  if (per_m.b_plus <= 0.0) return 0.0;
  if (gamma >= 1.0) return clamp01(per_m(n) / (gamma * static_cast<double>(n)));
  const double total = n <= kExactMixtureLimit
                           ? mixture_sum_exact(n, gamma, per_m)
                           : mixture_sum_windowed(n, gamma, per_m);
  return clamp01(total / (gamma * static_cast<double>(n)));
}

}  // namespace detail

// Closed-form evaluation of the Hoeffding mixture via the binomial identity
// sum_m C(n,m) gamma^m (1-gamma)^{n-m} e^{-sm} = (1 - gamma(1 - e^{-s}))^n.
// Includes the identity's m = 0 term as slack; log-space, so it survives n
// up to 1e8.
inline double delta_hoeffding_closed(std::int64_t n, const BlanketProfile& p) {
  if (n < 1) throw std::invalid_argument("delta_hoeffding_closed: n must be >= 1");
  if (!(p.a > 0.0))
    throw std::invalid_argument("delta_hoeffding_closed: requires a > 0");
  if (p.b_plus <= 0.0) return 0.0;
  const double b = p.range();
  if (!(b > 0.0)) return 0.0;
  const double s = 2.0 * p.a * p.a / (b * b);
  const double base_log = std::log1p(-p.gamma * (-std::expm1(-s)));
  const double log_val = std::log(b * b) - std::log(4.0 * p.a) -
                         std::log(p.gamma) - std::log(static_cast<double>(n)) +
                         static_cast<double>(n) * base_log;
  return clamp01(std::exp(log_val));
}

// Mixture bound with the capped Hoeffding per-m term.
inline double delta_hoeffding_mixture(std::int64_t n, const BlanketProfile& p) {
  if (n < 1) throw std::invalid_argument("delta_hoeffding_mixture: n must be >= 1");
  if (!(p.a > 0.0))
    throw std::invalid_argument("delta_hoeffding_mixture: requires a > 0");
  if (p.b_plus <= 0.0 || !(p.range() > 0.0)) return 0.0;
  return detail::mixture_delta_from_per_m(n, p.gamma, detail::make_hoeffding_per_m(p));
}

// Mixture bound with the capped Bennett per-m term.
inline double delta_bennett_mixture(std::int64_t n, const BlanketProfile& p) {
  if (n < 1) throw std::invalid_argument("delta_bennett_mixture: n must be >= 1");
  if (!(p.a > 0.0))
    throw std::invalid_argument("delta_bennett_mixture: requires a > 0");
  if (!(p.c2 > 0.0))
    throw std::invalid_argument("delta_bennett_mixture: requires c2 > 0");
  if (p.b_plus <= 0.0) return 0.0;
  return detail::mixture_delta_from_per_m(n, p.gamma, detail::make_bennett_per_m(p));
}

// The closed-form theorem bound for generic eps0-LDP randomizers, with the
// worst-case gamma already substituted and C = 1 - e^{-2}.
inline double delta_theorem_simplified(double eps, double eps0, std::int64_t n) {
  if (!(eps > 0.0) || !(eps0 > 0.0))
    throw std::invalid_argument("delta_theorem_simplified: eps, eps0 must be > 0");
  if (n < 1) throw std::invalid_argument("delta_theorem_simplified: n must be >= 1");
  const double a = std::expm1(eps);
  const double big_k = (std::exp(eps) + 1.0) * (std::exp(eps0) - std::exp(-eps0));
  const double c_const = -std::expm1(-2.0);  // 1 - e^{-2}
  const double exponent =
      -c_const * static_cast<double>(n) *
      std::min(std::exp(-eps0), a * a / (big_k * big_k));
  const double log_pref = std::log(big_k * big_k) -
                          std::log(4.0 * static_cast<double>(n) * a);
  return clamp01(std::exp(log_pref + exponent));
}

// Baseline amplification bound: eps = 12 eps0 sqrt(log(1/delta) / n), valid
// for eps0 < 1/2, n >= 1000, delta < 1/100.
inline double efmrtt_epsilon(double eps0, std::int64_t n, double delta) {
  if (!(eps0 < 0.5))
    throw infeasible_error("efmrtt_epsilon: requires eps0 < 1/2");
  if (!(eps0 > 0.0))
    throw std::invalid_argument("efmrtt_epsilon: eps0 must be > 0");
  if (n < 1000) throw infeasible_error("efmrtt_epsilon: requires n >= 1000");
  if (!(delta > 0.0 && delta < 0.01))
    throw infeasible_error("efmrtt_epsilon: requires delta < 1/100");
  return 12.0 * eps0 * std::sqrt(std::log(1.0 / delta) / static_cast<double>(n));
}

// The baseline's delta(eps) obtained by inverting the formula above.
// Validity gates are the theorem's, minus the one on delta itself.
inline double delta_efmrtt(double eps, double eps0, std::int64_t n) {
  if (!(eps0 > 0.0 && eps0 < 0.5))
    throw infeasible_error("delta_efmrtt: requires 0 < eps0 < 1/2");
  if (n < 1000) throw infeasible_error("delta_efmrtt: requires n >= 1000");
  if (!(eps > 0.0)) throw std::invalid_argument("delta_efmrtt: eps must be > 0");
  const double r = eps / (12.0 * eps0);
  return clamp01(std::exp(-static_cast<double>(n) * r * r));
}

// ---------------------------------------------------------------------------
// Method dispatch and calibration.

enum class BoundTag {
  kHoeffdingClosed,
  kHoeffdingMixture,
  kBennettMixture,
  kTheorem2Simplified,
  kEfmrtt,
};

enum class MechanismFamily { kGeneric, kKrr, kLaplace };

struct BoundMethod {
  BoundTag tag;
  MechanismFamily family = MechanismFamily::kGeneric;
  std::int64_t k = 0;  // randomized-response domain size when family is kKrr
};

inline BlanketProfile profile_for(MechanismFamily family, std::int64_t k,
                                  double eps0, double eps) {
  switch (family) {
    case MechanismFamily::kGeneric:
      return profile_generic(eps0, eps);
    case MechanismFamily::kKrr:
      return profile_krr(k, eps0, eps);
    case MechanismFamily::kLaplace:
      return profile_laplace(eps0, eps);
  }
  throw std::invalid_argument("profile_for: unknown mechanism family");
}

// delta(eps) certified by the given method at local budget eps0.
inline double delta_bound(const BoundMethod& method, double eps, double eps0,
                          std::int64_t n) {
  switch (method.tag) {
    case BoundTag::kHoeffdingClosed:
      return delta_hoeffding_closed(n, profile_for(method.family, method.k, eps0, eps));
    case BoundTag::kHoeffdingMixture:
      return delta_hoeffding_mixture(n, profile_for(method.family, method.k, eps0, eps));
    case BoundTag::kBennettMixture:
      return delta_bennett_mixture(n, profile_for(method.family, method.k, eps0, eps));
    case BoundTag::kTheorem2Simplified:
      return delta_theorem_simplified(eps, eps0, n);
    case BoundTag::kEfmrtt:
      return delta_efmrtt(eps, eps0, n);
  }
  throw std::invalid_argument("delta_bound: unknown bound tag");
}

struct CalibrationResult {
  double value = std::numeric_limits<double>::quiet_NaN();
  double bracket_width = 0.0;
  bool feasible = false;
  bool clamped = false;  // eps calibration fell back to the trivial eps0 guarantee
  int iterations = 0;
};

struct CalibrateOptions {
  double lower = 1e-6;  // below any practically meaningful eps
  double upper = std::numeric_limits<double>::quiet_NaN();  // eps0 / 20 default
  double width = 1e-12;
  bool clamp_to_eps0 = true;
};

// Smallest eps such that the method certifies (eps, delta)-DP for the
// shuffled mechanism, by bisection to absolute bracket width `width`. When
// even eps = eps0 is not certified, the result is clamped to eps0 (the
// shuffled mechanism is trivially eps0-DP by post-processing) and flagged.
inline CalibrationResult calibrate_epsilon(const BoundMethod& method,
                                           double eps0, std::int64_t n,
                                           double delta,
                                           const CalibrateOptions& opts = {}) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("calibrate_epsilon: delta must be in (0, 1)");
  if (!(eps0 > 0.0))
    throw std::invalid_argument("calibrate_epsilon: eps0 must be > 0");
  CalibrationResult res;
  if (method.tag == BoundTag::kEfmrtt) {
    double eps = efmrtt_epsilon(eps0, n, delta);
    // Guard the closed form against one-ulp rounding above the target.
    for (int i = 0; i < 8 && delta_efmrtt(eps, eps0, n) > delta; ++i)
      eps = std::nextafter(eps, std::numeric_limits<double>::infinity());
    res.value = std::min(eps, eps0);
    res.clamped = eps > eps0;
    res.feasible = true;
    return res;
  }
  const double hi_limit = std::isnan(opts.upper) ? eps0 : opts.upper;
  double lo = opts.lower;
  double hi = hi_limit;
  if (!(lo > 0.0 && lo < hi))
    throw std::invalid_argument("calibrate_epsilon: bad bracket");
  const auto f = [&](double eps) { return delta_bound(method, eps, eps0, n); };
  if (f(hi) > delta) {
    if (!opts.clamp_to_eps0) return res;  // infeasible
    res.value = hi_limit;
    res.clamped = true;
    res.feasible = true;
    return res;
  }
  if (f(lo) <= delta) {
    res.value = lo;
    res.feasible = true;
    return res;
  }
  int iters = 0;
  while (hi - lo > opts.width && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= delta) hi = mid; else lo = mid;
    ++iters;
  }
  res.value = hi;
  res.bracket_width = hi - lo;
  res.feasible = true;
  res.iterations = iters;
  return res;
}

// Largest eps0 such that the method certifies the target central budget
// after shuffling; mechanism-specific gammas are re-evaluated at every probe.
inline CalibrationResult calibrate_epsilon0(const BoundMethod& method,
                                            std::int64_t n,
                                            const PrivacyBudget& target,
                                            const CalibrateOptions& opts = {}) {
  validate_budget(target);
  const double delta = target.delta;
  const double eps_target = target.epsilon;
  if (!(delta < 1.0))
    throw std::invalid_argument("calibrate_epsilon0: delta must be in (0, 1)");
  CalibrationResult res;
  if (method.tag == BoundTag::kEfmrtt) {
    if (n < 1000) throw infeasible_error("efmrtt: requires n >= 1000");
    if (!(delta < 0.01)) throw infeasible_error("efmrtt: requires delta < 1/100");
    const double eps0 =
        eps_target * std::sqrt(static_cast<double>(n) / std::log(1.0 / delta)) / 12.0;
    if (!(eps0 < 0.5))
      throw infeasible_error("efmrtt: calibrated eps0 violates eps0 < 1/2");
    res.value = eps0;
    res.feasible = true;
    return res;
  }
  double lo = std::max(opts.lower, eps_target);
  double hi = std::isnan(opts.upper) ? 20.0 : opts.upper;
  const auto f = [&](double eps0) {
    return delta_bound(method, eps_target, eps0, n);
  };
  if (f(lo) > delta) return res;  // not even eps0 = eps_target is certified
  if (f(hi) <= delta) {
    res.value = hi;  // bracket-limited
    res.feasible = true;
    return res;
  }
  int iters = 0;
  while (hi - lo > opts.width && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= delta) lo = mid; else hi = mid;
    ++iters;
  }
  res.value = lo;
  res.bracket_width = hi - lo;
  res.feasible = true;
  res.iterations = iters;
  return res;
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_AMPLIFICATION_HPP_

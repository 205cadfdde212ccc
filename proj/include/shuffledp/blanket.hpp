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

#ifndef SHUFFLEDP_BLANKET_HPP_
#define SHUFFLEDP_BLANKET_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "shuffledp/numeric.hpp"
#include "shuffledp/random.hpp"
#include "shuffledp/randomizers.hpp"

namespace shuffledp {

// Blanket decomposition mu_x = (1 - gamma) nu_x + gamma omega of a local
// randomizer: gamma is the total variation similarity (the probability that
// a response is input-oblivious), omega the input-independent blanket.

// Total variation similarity gamma = integral of inf_x mu_x(y) dy.
inline double gamma(const RandomizerSpec& spec) {
  validate_spec(spec);
  struct Visitor {
    double operator()(const KrrSpec& s) const {
      return detail::krr_gamma(s.k, s.eps0);
    }
    double operator()(const LaplaceSpec& s) const {
      return std::exp(-0.5 * s.eps0);
    }
    double operator()(const GaussianSpec& s) const {
      return 2.0 * normal_cdf(-0.5 / s.sigma);
    }
    double operator()(const SummationSpec& s) const {
      return detail::summation_gamma(s);
    }
  };
  return std::visit(Visitor{}, spec);
}

// Worst-case similarity of any eps0-LDP randomizer: gamma >= e^{-eps0}.
inline double gamma_lower_bound(double eps0) {
  if (!(eps0 >= 0.0))
    throw std::invalid_argument("gamma_lower_bound: eps0 must be >= 0");
  return std::exp(-eps0);
}

// Blanket density omega(y) = inf_x mu_x(y) / gamma.
inline double blanket_density(const RandomizerSpec& spec, Message y) {
  validate_spec(spec);
  struct Visitor {
    double y;
    double operator()(const KrrSpec& s) const {
      detail::check_symbol(y, 1, s.k, "blanket_density(KRR)");
      return 1.0 / static_cast<double>(s.k);
    }
    double operator()(const LaplaceSpec& s) const {
      return 0.5 * s.eps0 * std::exp(-s.eps0 * std::abs(y - 0.5));
    }
    double operator()(const GaussianSpec& s) const {
      const double phi0 = normal_pdf(y / s.sigma) / s.sigma;
      const double phi1 = normal_pdf((y - 1.0) / s.sigma) / s.sigma;
      const double g = 2.0 * normal_cdf(-0.5 / s.sigma);
      return std::min(phi0, phi1) / g;
    }
    double operator()(const SummationSpec& s) const {
      detail::check_symbol(y, 0, s.k, "blanket_density(Summation)");
      return 1.0 / static_cast<double>(s.k + 1);
    }
  };
  return std::visit(Visitor{y}, spec);
}

// One draw W ~ omega.
inline Message blanket_sample(const RandomizerSpec& spec, Rng& rng) {
  validate_spec(spec);
  struct Visitor {
    Rng& rng;
    Message operator()(const KrrSpec& s) const {
      return static_cast<double>(uniform_int(rng, 1, s.k));
    }
    Message operator()(const LaplaceSpec& s) const {
      return 0.5 + sample_laplace(rng, 1.0 / s.eps0);
    }
    Message operator()(const GaussianSpec& s) const {
      // By symmetry about 1/2, omega restricted to y >= 1/2 is the N(0, s^2)
      // density normalized on [1/2, inf). Sample it by inverse CDF, then
      // reflect to the lower half with probability 1/2. Rejection-free.
      const double z =
          s.sigma * sample_truncated_standard_normal_above(rng, 0.5 / s.sigma);
      return bernoulli(rng, 0.5) ? 1.0 - z : z;
    }
    Message operator()(const SummationSpec& s) const {
      return static_cast<double>(uniform_int(rng, 0, s.k));
    }
  };
  return std::visit(Visitor{rng}, spec);
}

// One draw of the privacy amplification random variable
// L = (mu_x(W) - e^eps mu_x'(W)) / omega(W) with W ~ omega.
inline double amplification_rv_sample(const RandomizerSpec& spec, double eps,
                                      double x, double x_prime, Rng& rng) {
  if (!(eps >= 0.0))
    throw std::invalid_argument("amplification_rv_sample: eps must be >= 0");
  const Message w = blanket_sample(spec, rng);
  const double num = density(spec, x, w) - std::exp(eps) * density(spec, x_prime, w);
  return num / blanket_density(spec, w);
}

enum class ProfileSource { kGeneric, kKrr, kLaplace };

// Moment/range profile of L for a given central eps: mean -a = 1 - e^eps,
// range [b_minus, b_plus], and a second-moment bound c2.
struct BlanketProfile {
  double gamma;
  double a;        // e^eps - 1
  double b_minus;  // lower bound on L
  double b_plus;   // upper bound on L
  double c2;       // upper bound on E L^2
  double epsilon;
  ProfileSource source;

  double range() const { return b_plus - b_minus; }
};

namespace detail {

inline void validate_profile(const BlanketProfile& p) {
  constexpr double kTol = 1e-9;
  if (!(p.gamma > 0.0 && p.gamma <= 1.0 + 1e-12))
    throw std::invalid_argument("BlanketProfile: gamma must be in (0, 1]");
  const double mean = -p.a;  // 1 - e^eps
  if (p.b_minus > mean + kTol || p.b_plus < mean - kTol)
    throw std::invalid_argument("BlanketProfile: mean outside [b_minus, b_plus]");
  if (p.c2 < p.a * p.a - kTol)
    throw std::invalid_argument("BlanketProfile: c2 below squared mean");
}

}  // namespace detail

// Profile valid for any eps0-LDP randomizer. gamma defaults to the
// worst-case e^{-eps0} but accepts the exact mechanism value when known.
inline BlanketProfile profile_generic(double eps0, double eps,
                                      std::optional<double> gamma_opt = {}) {
  if (!(eps0 >= 0.0) || !(eps >= 0.0))
    throw std::invalid_argument("profile_generic: eps0 and eps must be >= 0");
  const double g = gamma_opt.value_or(gamma_lower_bound(eps0));
  if (!(g >= gamma_lower_bound(eps0) * (1.0 - 1e-12) && g <= 1.0 + 1e-12))
    throw std::invalid_argument("profile_generic: gamma outside [e^{-eps0}, 1]");
  BlanketProfile p;
  p.gamma = std::min(g, 1.0);
  p.a = std::expm1(eps);
  p.b_minus = g * std::exp(-eps0) * (1.0 - std::exp(eps + 2.0 * eps0));
  p.b_plus = g * std::exp(eps0) * (1.0 - std::exp(eps - 2.0 * eps0));
  p.c2 = g * std::exp(eps0) * (std::exp(2.0 * eps) + 1.0) -
         2.0 * g * g * std::exp(eps - 2.0 * eps0);
  p.epsilon = eps;
  p.source = ProfileSource::kGeneric;
  detail::validate_profile(p);
  return p;
}

// Exact profile of k-ary eps0-LDP randomized response. The second moment is
// an equality, not just a bound.
inline BlanketProfile profile_krr(std::int64_t k, double eps0, double eps) {
  if (k < 2) throw std::invalid_argument("profile_krr: k must be >= 2");
  if (!(eps0 >= 0.0) || !(eps >= 0.0))
    throw std::invalid_argument("profile_krr: eps0 and eps must be >= 0");
  const double g = detail::krr_gamma(k, eps0);
  const double kd = static_cast<double>(k);
  const double one_minus_ee = -std::expm1(eps);  // 1 - e^eps
  BlanketProfile p;
  p.gamma = g;
  p.a = std::expm1(eps);
  p.b_minus = g * one_minus_ee - (1.0 - g) * kd * std::exp(eps);
  p.b_plus = g * one_minus_ee + (1.0 - g) * kd;
  p.c2 = g * (2.0 - g) * one_minus_ee * one_minus_ee +
         (1.0 - g) * (1.0 - g) * kd * (1.0 + std::exp(2.0 * eps));
  p.epsilon = eps;
  p.source = ProfileSource::kKrr;
  detail::validate_profile(p);
  return p;
}

// Exact-range profile of the eps0-LDP Laplace mechanism on [0, 1].
inline BlanketProfile profile_laplace(double eps0, double eps) {
  if (!(eps0 > 0.0))
    throw std::invalid_argument("profile_laplace: eps0 must be > 0");
  if (!(eps >= 0.0)) throw std::invalid_argument("profile_laplace: eps must be >= 0");
  BlanketProfile p;
  p.gamma = std::exp(-0.5 * eps0);
  p.a = std::expm1(eps);
  p.b_minus = std::exp(-0.5 * eps0) * (1.0 - std::exp(eps + eps0));
  p.b_plus = std::exp(0.5 * eps0) * (1.0 - std::exp(eps - eps0));
  p.c2 = (std::exp(2.0 * eps) + 1.0) / 3.0 *
             (2.0 * std::exp(0.5 * eps0) + std::exp(-eps0)) -
         2.0 * std::exp(eps) * (2.0 * std::exp(-0.5 * eps0) - std::exp(-eps0));
  p.epsilon = eps;
  p.source = ProfileSource::kLaplace;
  detail::validate_profile(p);
  return p;
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_BLANKET_HPP_

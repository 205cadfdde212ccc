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

#ifndef SHUFFLEDP_RANDOMIZERS_HPP_
#define SHUFFLEDP_RANDOMIZERS_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "shuffledp/numeric.hpp"
#include "shuffledp/random.hpp"

namespace shuffledp {

// Local randomizers and their output densities.
//
// Messages are carried as doubles: k-ary randomized response emits a symbol
// in {1..k}, the fixed-point summation randomizer an integer in {0..k}, and
// the Laplace/Gaussian randomizers a real. Discrete kinds report probability
// mass, continuous kinds report density w.r.t. Lebesgue measure on R.
using Message = double;

// k-ary randomized response: truthful with probability 1 - gamma, uniform on
// {1..k} with probability gamma, where gamma = k / (e^{eps0} + k - 1).
struct KrrSpec {
  std::int64_t k;
  double eps0;
};

// R(x) = x + Lap(1/eps0) on inputs in [0, 1].
struct LaplaceSpec {
  double eps0;
};

// R(x) = x + N(0, sigma^2) on inputs in [0, 1].
struct GaussianSpec {
  double sigma;
};

// Fixed-point summation randomizer: encode x with precision k by randomized
// rounding, then report truthfully or emit a uniform value in {0..k} with
// probability c(k+1)/n.
struct SummationSpec {
  double c;
  std::int64_t k;
  std::int64_t n;
};

using RandomizerSpec =
    std::variant<KrrSpec, LaplaceSpec, GaussianSpec, SummationSpec>;

inline void validate_spec(const KrrSpec& s) {
  if (s.k < 2) throw std::invalid_argument("KrrSpec: k must be >= 2");
  if (!(s.eps0 >= 0.0))
    throw std::invalid_argument("KrrSpec: eps0 must be >= 0");
}

inline void validate_spec(const LaplaceSpec& s) {
  if (!(s.eps0 > 0.0))
    throw std::invalid_argument("LaplaceSpec: eps0 must be > 0");
}

inline void validate_spec(const GaussianSpec& s) {
  if (!(s.sigma > 0.0))
    throw std::invalid_argument("GaussianSpec: sigma must be > 0");
}

inline void validate_spec(const SummationSpec& s) {
  if (!(s.c >= 0.0)) throw std::invalid_argument("SummationSpec: c must be >= 0");
  if (s.k < 1) throw std::invalid_argument("SummationSpec: k must be >= 1");
  if (s.n < 1) throw std::invalid_argument("SummationSpec: n must be >= 1");
  if (!(s.c * static_cast<double>(s.k + 1) / static_cast<double>(s.n) < 1.0))
    throw std::invalid_argument("SummationSpec: requires c(k+1)/n < 1");
}

inline void validate_spec(const RandomizerSpec& spec) {
  std::visit([](const auto& s) { validate_spec(s); }, spec);
}

namespace detail {

// Truthful-report probability of k-ary eps0-LDP randomized response.
inline double krr_p_true(std::int64_t k, double eps0) {
  const double denom = std::exp(eps0) + static_cast<double>(k) - 1.0;
  return std::exp(eps0) / denom;
}

inline double krr_p_other(std::int64_t k, double eps0) {
  const double denom = std::exp(eps0) + static_cast<double>(k) - 1.0;
  return 1.0 / denom;
}

inline double krr_gamma(std::int64_t k, double eps0) {
  return static_cast<double>(k) /
         (std::exp(eps0) + static_cast<double>(k) - 1.0);
}

inline double summation_gamma(const SummationSpec& s) {
  return s.c * static_cast<double>(s.k + 1) / static_cast<double>(s.n);
}

inline void check_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument(std::string(what) + ": input must be in [0, 1]");
}

inline std::int64_t check_symbol(double y, std::int64_t lo, std::int64_t hi,
                                 const char* what) {
  const double r = std::round(y);
  if (r != y || r < static_cast<double>(lo) || r > static_cast<double>(hi))
    throw std::invalid_argument(std::string(what) +
                                ": message outside the symbol range");
  return static_cast<std::int64_t>(r);
}

}  // namespace detail

// Fixed-point encoding of x in [0, 1] with precision k: floor(xk) plus a
// Bernoulli rounding of the fractional part. Unbiased; exact grid points
// never consume randomness.
inline std::int64_t encode_fixed_point(double x, std::int64_t k, Rng& rng) {
  detail::check_unit_interval(x, "encode_fixed_point");
  if (k < 1) throw std::invalid_argument("encode_fixed_point: k must be >= 1");
  const double xk = x * static_cast<double>(k);
  const double fl = std::floor(xk);
  const double frac = xk - fl;
  std::int64_t v = static_cast<std::int64_t>(fl);
  if (frac > 0.0 && bernoulli(rng, frac)) ++v;
  return v;
}

// One draw from the randomizer's output distribution mu_x.
inline Message randomize(const RandomizerSpec& spec, double x, Rng& rng) {
  validate_spec(spec);
  struct Visitor {
    double x;
    Rng& rng;
    Message operator()(const KrrSpec& s) const {
      const std::int64_t xi = detail::check_symbol(x, 1, s.k, "randomize(KRR)");
      if (bernoulli(rng, detail::krr_gamma(s.k, s.eps0)))
        return static_cast<double>(uniform_int(rng, 1, s.k));
      return static_cast<double>(xi);
    }
    Message operator()(const LaplaceSpec& s) const {
      detail::check_unit_interval(x, "randomize(Laplace)");
      return x + sample_laplace(rng, 1.0 / s.eps0);
    }
    Message operator()(const GaussianSpec& s) const {
      detail::check_unit_interval(x, "randomize(Gaussian)");
      return x + s.sigma * sample_standard_normal(rng);
    }
    Message operator()(const SummationSpec& s) const {
      const std::int64_t enc = encode_fixed_point(x, s.k, rng);
      if (bernoulli(rng, detail::summation_gamma(s)))
        return static_cast<double>(uniform_int(rng, 0, s.k));
      return static_cast<double>(enc);
    }
  };
  return std::visit(Visitor{x, rng}, spec);
}

// mu_x(y): probability mass for discrete kinds, density for continuous ones.
inline double density(const RandomizerSpec& spec, double x, Message y) {
  validate_spec(spec);
  struct Visitor {
    double x, y;
    double operator()(const KrrSpec& s) const {
      const std::int64_t xi = detail::check_symbol(x, 1, s.k, "density(KRR) x");
      const std::int64_t yi = detail::check_symbol(y, 1, s.k, "density(KRR) y");
      return yi == xi ? detail::krr_p_true(s.k, s.eps0)
                      : detail::krr_p_other(s.k, s.eps0);
    }
    double operator()(const LaplaceSpec& s) const {
      detail::check_unit_interval(x, "density(Laplace)");
      return 0.5 * s.eps0 * std::exp(-s.eps0 * std::abs(y - x));
    }
    double operator()(const GaussianSpec& s) const {
      detail::check_unit_interval(x, "density(Gaussian)");
      return normal_pdf((y - x) / s.sigma) / s.sigma;
    }
    double operator()(const SummationSpec& s) const {
      detail::check_unit_interval(x, "density(Summation) x");
      const std::int64_t yi =
          detail::check_symbol(y, 0, s.k, "density(Summation) y");
      const double gamma = detail::summation_gamma(s);
      const double xk = x * static_cast<double>(s.k);
      const double fl = std::floor(xk);
      const double frac = xk - fl;
      double round_mass = 0.0;
      if (yi == static_cast<std::int64_t>(fl)) round_mass = 1.0 - frac;
      else if (yi == static_cast<std::int64_t>(fl) + 1) round_mass = frac;
      return (1.0 - gamma) * round_mass +
             gamma / static_cast<double>(s.k + 1);
    }
  };
  return std::visit(Visitor{x, y}, spec);
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_RANDOMIZERS_HPP_

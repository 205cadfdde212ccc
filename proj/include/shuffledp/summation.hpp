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

#ifndef SHUFFLEDP_SUMMATION_HPP_
#define SHUFFLEDP_SUMMATION_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "shuffledp/histogram.hpp"
#include "shuffledp/numeric.hpp"
#include "shuffledp/randomizers.hpp"

namespace shuffledp {

// Single-message real-summation protocol: parameter selection, the analyzer
// with debiasing, and the theoretical MSE bound. The local randomizer emits
// k+1 symbols {0..k}; privacy statements use that domain size throughout.
// Natural logarithms everywhere.

struct SummationParams {
  double c;        // blanket-mass parameter
  std::int64_t k;  // fixed-point precision
  std::int64_t n;  // party count
  double gamma;    // c (k+1) / n

  SummationSpec randomizer_spec() const { return SummationSpec{c, k, n}; }
};

inline SummationParams make_summation_params(double c, std::int64_t k,
                                             std::int64_t n) {
  if (!(c >= 0.0))
    throw std::invalid_argument("SummationParams: c must be >= 0");
  if (k < 1) throw std::invalid_argument("SummationParams: k must be >= 1");
  if (n < 2) throw std::invalid_argument("SummationParams: n must be >= 2");
  const double gamma = c * static_cast<double>(k + 1) / static_cast<double>(n);
  if (!(gamma < 1.0))
    throw infeasible_error("SummationParams: requires c(k+1)/n < 1");
  return SummationParams{c, k, n, gamma};
}

// Blanket probability required by the histogram privacy theorem:
// gamma = max{ 14 k log(2/delta) / ((n-1) eps^2), 27 k / ((n-1) eps) }.
// The caller must check the result is < 1 for the theorem to apply.
inline double histogram_gamma(std::int64_t k, std::int64_t n, double eps,
                              double delta) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("histogram_gamma: eps must be in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("histogram_gamma: delta must be in (0, 1]");
  if (n < 2) throw std::invalid_argument("histogram_gamma: n must be >= 2");
  if (k < 2) throw std::invalid_argument("histogram_gamma: k must be >= 2");
  const double kd = static_cast<double>(k);
  const double nm1 = static_cast<double>(n - 1);
  const double term_delta = 14.0 * kd * std::log(2.0 / delta) / (nm1 * eps * eps);
  const double term_eps = 27.0 * kd / (nm1 * eps);
  return std::max(term_delta, term_eps);
}

// Protocol parameters for an (eps, delta) target:
// c = max{14 log(2/delta)/eps^2, 27/eps}, k = ceil((n/c)^{1/3}).
inline SummationParams choose_parameters(double eps, double delta,
                                         std::int64_t n) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("choose_parameters: eps must be in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("choose_parameters: delta must be in (0, 1]");
  if (n < 2) throw std::invalid_argument("choose_parameters: n must be >= 2");
  const double c = std::max(14.0 * std::log(2.0 / delta) / (eps * eps), 27.0 / eps);
  const std::int64_t k = static_cast<std::int64_t>(
      std::ceil(std::cbrt(static_cast<double>(n) / c)));
  const double gamma = c * static_cast<double>(k + 1) / static_cast<double>(n);
  if (!(gamma < 1.0))
    throw infeasible_error(
        "choose_parameters: n too small for the requested budget "
        "(c(k+1)/n >= 1)");
  return SummationParams{c, std::max<std::int64_t>(k, 1), n, gamma};
}

// Analyzer: z_hat = (1/k) sum y_i, then
// DeBias(w) = (w - c(k+1)/2) / (1 - c(k+1)/n). Unbiased estimate of
// sum x_i; intentionally not clipped to [0, n].
inline double analyze(const Histogram& messages, const SummationParams& params) {
  if (messages.total() != params.n)
    throw std::invalid_argument("analyze: message count must equal n");
  KahanSum sum;
  for (const auto& [symbol, count] : messages.counts()) {
    if (symbol < 0 || symbol > params.k)
      throw std::invalid_argument("analyze: message outside {0..k}");
    sum.add(static_cast<double>(symbol) * static_cast<double>(count));
  }
  const double z_hat = sum.value() / static_cast<double>(params.k);
  const double shift = params.c * static_cast<double>(params.k + 1) / 2.0;
  return (z_hat - shift) / (1.0 - params.gamma);
}

// MSE bound of the protocol: n/(1-gamma)^2 * (1/(4k^2) + c(k+1)/(2n)).
inline double theoretical_mse_bound(const SummationParams& params) {
  const double n = static_cast<double>(params.n);
  const double k = static_cast<double>(params.k);
  const double one_minus = 1.0 - params.gamma;
  return n / (one_minus * one_minus) *
         (1.0 / (4.0 * k * k) +
          params.c * static_cast<double>(params.k + 1) / (2.0 * n));
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_SUMMATION_HPP_

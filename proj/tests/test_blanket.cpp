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

#include "shuffledp/blanket.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "shuffledp/numeric.hpp"

using namespace shuffledp;

namespace {

const double kLn3 = std::log(3.0);
const double kLn2 = std::log(2.0);

// Quadrature window and kink split for the unbounded blankets.
double blanket_mass(const RandomizerSpec& spec) {
  if (const auto* lap = std::get_if<LaplaceSpec>(&spec)) {
    const double lo = -20.0 / lap->eps0;
    const double hi = 1.0 + 20.0 / lap->eps0;
    auto f = [&](double y) { return blanket_density(spec, y); };
    return simpson(f, lo, 0.5, 40000) + simpson(f, 0.5, hi, 40000);
  }
  const auto& gauss = std::get<GaussianSpec>(spec);
  const double lo = -10.0 * gauss.sigma;
  const double hi = 1.0 + 10.0 * gauss.sigma;
  auto f = [&](double y) { return blanket_density(spec, y); };
  return simpson(f, lo, 0.5, 40000) + simpson(f, 0.5, hi, 40000);
}

}  // namespace

TEST_CASE("total variation similarity of the named mechanisms") {
  CHECK(gamma(RandomizerSpec{KrrSpec{2, kLn3}}) ==
        Catch::Approx(0.5).margin(1e-15));
  // eps0 -> 0 limit: a fully random mechanism has gamma 1
  CHECK(gamma(RandomizerSpec{LaplaceSpec{1e-12}}) ==
        Catch::Approx(1.0).margin(1e-12));
  CHECK(gamma(RandomizerSpec{GaussianSpec{0.5}}) ==
        Catch::Approx(0.31731050786291415).margin(1e-12));
  CHECK(gamma(RandomizerSpec{SummationSpec{2.0, 4, 100}}) ==
        Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("generic similarity lower bound e^{-eps0}") {
  CHECK(gamma_lower_bound(0.0) == 1.0);
  CHECK(gamma_lower_bound(kLn2) == Catch::Approx(0.5).margin(1e-15));
  CHECK(gamma_lower_bound(1.0) ==
        Catch::Approx(0.36787944117144233).margin(1e-12));
}

TEST_CASE("blanket densities") {
  for (std::int64_t y = 1; y <= 4; ++y)
    CHECK(blanket_density(RandomizerSpec{KrrSpec{4, 1.7}},
                          static_cast<double>(y)) == 0.25);
  CHECK(blanket_density(RandomizerSpec{LaplaceSpec{2.0}}, 0.5) ==
        Catch::Approx(1.0).margin(1e-15));
  // at the symmetry point both Gaussian branches agree
  const RandomizerSpec gauss{GaussianSpec{1.0}};
  const double phi_half = std::exp(-0.125) / std::sqrt(2.0 * M_PI);
  const double g = gamma(gauss);
  CHECK(blanket_density(gauss, 0.5) == Catch::Approx(phi_half / g).margin(1e-12));
  CHECK(density(gauss, 0.0, 0.5) == Catch::Approx(density(gauss, 1.0, 0.5)).margin(1e-15));
}

TEST_CASE("blanket samplers match their densities") {
  const std::int64_t n = 1000000;
  {
    Rng rng = make_rng(31);
    std::vector<std::int64_t> counts(4, 0);
    for (std::int64_t i = 0; i < n; ++i)
      counts[static_cast<std::size_t>(
          blanket_sample(RandomizerSpec{KrrSpec{3, 1.0}}, rng))]++;
    const double sigma = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / n);
    for (int y = 1; y <= 3; ++y)
      CHECK(std::abs(static_cast<double>(counts[static_cast<std::size_t>(y)]) / n -
                     1.0 / 3.0) <= 4.0 * sigma);
  }
  {
    // Laplace blanket is centered at 1/2: check the sample median
    Rng rng = make_rng(32);
    std::vector<double> samples(static_cast<std::size_t>(n));
    for (auto& s : samples)
      s = blanket_sample(RandomizerSpec{LaplaceSpec{1.0}}, rng);
    std::nth_element(samples.begin(), samples.begin() + n / 2, samples.end());
    const double median = samples[static_cast<std::size_t>(n / 2)];
    const double sigma_med = 1.0 / (2.0 * 0.5 * std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(median - 0.5) <= 4.0 * sigma_med);
  }
  {
    // Gaussian blanket: 20-bin histogram against quadrature of the density,
    // plus symmetry of the two halves
    const RandomizerSpec spec{GaussianSpec{0.5}};
    Rng rng = make_rng(33);
    const double lo = -1.5, hi = 2.5, w = (hi - lo) / 20.0;
    std::vector<std::int64_t> bins(20, 0);
    std::int64_t below = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double y = blanket_sample(spec, rng);
      if (y < 0.5) ++below;
      if (y >= lo && y < hi)
        bins[static_cast<std::size_t>((y - lo) / w)]++;
    }
    const double half_sigma = std::sqrt(0.25 * static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(below) - 0.5 * n) <= 4.0 * half_sigma);
    for (int b = 0; b < 20; ++b) {
      const double p = simpson([&](double y) { return blanket_density(spec, y); },
                               lo + b * w, lo + (b + 1) * w, 256);
      const double freq =
          static_cast<double>(bins[static_cast<std::size_t>(b)]) / n;
      const double sigma = std::sqrt(p * (1.0 - p) / n);
      INFO("bin " << b);
      CHECK(std::abs(freq - p) <= 4.0 * sigma + 1e-9);
    }
  }
}

TEST_CASE("amplification variable degenerates to zero for identical inputs") {
  Rng rng = make_rng(34);
  for (int i = 0; i < 200; ++i)
    CHECK(amplification_rv_sample(RandomizerSpec{KrrSpec{3, 1.0}}, 0.0, 2.0, 2.0,
                                  rng) == 0.0);
}

TEST_CASE("amplification variable of binary randomized response is two-point") {
  const RandomizerSpec spec{KrrSpec{2, kLn3}};
  Rng rng = make_rng(35);
  std::int64_t hi = 0;
  const std::int64_t n = 1000000;
  for (std::int64_t i = 0; i < n; ++i) {
    const double l = amplification_rv_sample(spec, kLn2, 1.0, 2.0, rng);
    const bool is_hi = std::abs(l - 0.5) < 1e-12;
    const bool is_lo = std::abs(l + 2.5) < 1e-12;
    REQUIRE((is_hi || is_lo));
    if (is_hi) ++hi;
  }
  const double sigma = std::sqrt(0.25 * static_cast<double>(n));
  CHECK(std::abs(static_cast<double>(hi) - 0.5 * n) <= 4.0 * sigma);
}

TEST_CASE("amplification variable has mean 1 - e^eps") {
  struct Case {
    RandomizerSpec spec;
    double eps, x, xp;
    std::uint64_t seed;
  };
  const std::int64_t n = 1000000;
  for (const Case& c :
       {Case{RandomizerSpec{KrrSpec{3, 1.0}}, 0.4, 1.0, 3.0, 41},
        Case{RandomizerSpec{LaplaceSpec{1.0}}, 0.5, 0.0, 1.0, 42},
        Case{RandomizerSpec{GaussianSpec{0.5}}, 0.3, 0.0, 1.0, 43},
        Case{RandomizerSpec{SummationSpec{2.0, 4, 100}}, 0.2, 0.0, 1.0, 44}}) {
    Rng rng = make_rng(c.seed);
    KahanSum s1, s2;
    for (std::int64_t i = 0; i < n; ++i) {
      const double l = amplification_rv_sample(c.spec, c.eps, c.x, c.xp, rng);
      s1.add(l);
      s2.add(l * l);
    }
    const double mean = s1.value() / n;
    const double var = s2.value() / n - mean * mean;
    const double tol = 5.0 * std::sqrt(var) / 1000.0;  // 5 se at 1e6 samples
    CHECK(std::abs(mean - (1.0 - std::exp(c.eps))) <= tol);
  }
}

TEST_CASE("generic profile formulas") {
  {
    // degenerate blanket at eps0 = 0: L is the constant 1 - e^eps
    const BlanketProfile p = profile_generic(0.0, 1.0);
    CHECK(p.gamma == 1.0);
    CHECK(p.b_minus == Catch::Approx(1.0 - M_E).margin(1e-12));
    CHECK(p.b_plus == Catch::Approx(1.0 - M_E).margin(1e-12));
    CHECK(p.c2 == Catch::Approx((M_E - 1.0) * (M_E - 1.0)).margin(1e-12));
  }
  {
    const BlanketProfile p = profile_generic(1.0, 0.5, std::exp(-1.0));
    CHECK(p.a == Catch::Approx(0.64872127070012815).margin(1e-12));
    CHECK(p.b_plus == Catch::Approx(0.77686983985157017).margin(1e-12));
    CHECK(p.b_minus == Catch::Approx(-1.5133859874635155).margin(1e-12));
    CHECK(p.c2 == Catch::Approx(3.6578870616144082).margin(1e-12));
  }
  {
    // eps = 0 still yields a valid profile; bound functions reject a = 0
    const BlanketProfile p = profile_generic(1.0, 0.0);
    CHECK(p.a == 0.0);
    CHECK(p.b_minus <= 0.0);
    CHECK(p.b_plus >= 0.0);
  }
}

TEST_CASE("randomized response profile formulas") {
  {
    const BlanketProfile p = profile_krr(5, 0.0, 0.7);
    CHECK(p.gamma == 1.0);
    const double v = 1.0 - std::exp(0.7);
    CHECK(p.b_minus == Catch::Approx(v).margin(1e-12));
    CHECK(p.b_plus == Catch::Approx(v).margin(1e-12));
    CHECK(p.c2 == Catch::Approx(v * v).margin(1e-12));
  }
  {
    const BlanketProfile p = profile_krr(2, kLn3, kLn2);
    CHECK(p.gamma == Catch::Approx(0.5).margin(1e-15));
    CHECK(p.b_plus == Catch::Approx(0.5).margin(1e-12));
    CHECK(p.b_minus == Catch::Approx(-2.5).margin(1e-12));
    CHECK(p.c2 == Catch::Approx(3.25).margin(1e-12));
  }
  {
    // the second moment is an equality for randomized response
    const BlanketProfile p = profile_krr(2, kLn3, kLn2);
    Rng rng = make_rng(51);
    const std::int64_t n = 1000000;
    KahanSum s2, s4;
    for (std::int64_t i = 0; i < n; ++i) {
      const double l =
          amplification_rv_sample(RandomizerSpec{KrrSpec{2, kLn3}}, kLn2, 1.0, 2.0, rng);
      s2.add(l * l);
      s4.add(l * l * l * l);
    }
    const double m2 = s2.value() / n;
    const double var2 = s4.value() / n - m2 * m2;
    CHECK(std::abs(m2 - p.c2) <= 5.0 * std::sqrt(var2 / n));
  }
}

TEST_CASE("laplace profile formulas") {
  {
    // eps0 -> 0+ limit: c2 -> a^2
    const BlanketProfile p = profile_laplace(1e-8, 0.5);
    CHECK(p.c2 == Catch::Approx(p.a * p.a).margin(1e-6));
  }
  {
    const BlanketProfile p = profile_laplace(1.0, 0.0);
    CHECK(p.b_minus == Catch::Approx(-1.0421906109874947).margin(1e-12));
    CHECK(p.b_plus == Catch::Approx(1.0421906109874947).margin(1e-12));
    CHECK(p.b_minus < 0.0);
    CHECK(p.b_plus > 0.0);
  }
  {
    Rng rng = make_rng(52);
    const std::int64_t n = 1000000;
    KahanSum s1, s2;
    for (std::int64_t i = 0; i < n; ++i) {
      const double l = amplification_rv_sample(RandomizerSpec{LaplaceSpec{1.0}},
                                               0.5, 0.0, 1.0, rng);
      s1.add(l);
      s2.add(l * l);
    }
    const double mean = s1.value() / n;
    const double var = s2.value() / n - mean * mean;
    CHECK(std::abs(mean - (1.0 - std::exp(0.5))) <= 5.0 * std::sqrt(var / n));
  }
}

TEST_CASE("decomposition is valid: nu_x nonnegative and omega normalized") {
  const std::vector<RandomizerSpec> specs = {
      RandomizerSpec{KrrSpec{2, kLn3}},     RandomizerSpec{KrrSpec{5, 1.0}},
      RandomizerSpec{LaplaceSpec{1.0}},     RandomizerSpec{LaplaceSpec{2.0}},
      RandomizerSpec{GaussianSpec{0.5}},    RandomizerSpec{GaussianSpec{1.0}},
      RandomizerSpec{SummationSpec{2.0, 4, 100}}};
  for (const auto& spec : specs) {
    const double g = gamma(spec);
    const bool discrete = std::get_if<KrrSpec>(&spec) || std::get_if<SummationSpec>(&spec);
    std::vector<double> xs, ys;
    if (const auto* krr = std::get_if<KrrSpec>(&spec)) {
      for (std::int64_t v = 1; v <= krr->k; ++v) {
        xs.push_back(static_cast<double>(v));
        ys.push_back(static_cast<double>(v));
      }
    } else {
      for (int i = 0; i <= 10; ++i) xs.push_back(i / 10.0);
      if (std::get_if<SummationSpec>(&spec)) {
        for (std::int64_t v = 0; v <= 4; ++v) ys.push_back(static_cast<double>(v));
      } else {
        for (int i = -20; i <= 30; ++i) ys.push_back(i / 10.0);
      }
    }
    for (double x : xs)
      for (double y : ys) {
        INFO("x=" << x << " y=" << y);
        CHECK(density(spec, x, y) - g * blanket_density(spec, y) >= -1e-12);
      }
    if (discrete) {
      KahanSum mass;
      for (double y : ys) mass.add(blanket_density(spec, y));
      if (std::get_if<KrrSpec>(&spec))
        CHECK(mass.value() == Catch::Approx(1.0).margin(1e-12));
      else
        CHECK(mass.value() == Catch::Approx(1.0).margin(1e-12));
    } else {
      CHECK(blanket_mass(spec) == Catch::Approx(1.0).margin(1e-6));
    }
  }
}

TEST_CASE("infimum over x is attained at the endpoints") {
  for (const RandomizerSpec spec :
       {RandomizerSpec{LaplaceSpec{1.0}}, RandomizerSpec{GaussianSpec{0.5}}}) {
    for (int yi = -30; yi <= 40; ++yi) {
      const double y = yi / 10.0;
      const double endpoint_min =
          std::min(density(spec, 0.0, y), density(spec, 1.0, y));
      for (int xi = 0; xi <= 100; ++xi) {
        const double x = xi / 100.0;
        CHECK(density(spec, x, y) >= endpoint_min - 1e-12);
      }
    }
  }
}

TEST_CASE("mechanism-specific ranges sit inside the generic range") {
  for (double eps0 : {0.5, 1.0, 2.0}) {
    for (double frac : {0.1, 0.4, 0.8}) {
      const double eps = frac * eps0;
      {
        const BlanketProfile krr = profile_krr(2, eps0, eps);
        const BlanketProfile gen = profile_generic(eps0, eps, krr.gamma);
        CHECK(gen.b_minus <= krr.b_minus + 1e-12);
        CHECK(krr.b_plus <= gen.b_plus + 1e-12);
      }
      {
        const BlanketProfile lap = profile_laplace(eps0, eps);
        const BlanketProfile gen = profile_generic(eps0, eps, lap.gamma);
        CHECK(gen.b_minus <= lap.b_minus + 1e-12);
        CHECK(lap.b_plus <= gen.b_plus + 1e-12);
      }
    }
  }
}

TEST_CASE("sampled L stays within the profile range") {
  const std::int64_t n = 200000;
  {
    const BlanketProfile p = profile_krr(2, kLn3, kLn2);
    Rng rng = make_rng(61);
    for (std::int64_t i = 0; i < n; ++i) {
      const double l = amplification_rv_sample(RandomizerSpec{KrrSpec{2, kLn3}},
                                               kLn2, 1.0, 2.0, rng);
      REQUIRE(l >= p.b_minus - 1e-9);
      REQUIRE(l <= p.b_plus + 1e-9);
    }
  }
  {
    const BlanketProfile p = profile_laplace(1.0, 0.5);
    Rng rng = make_rng(62);
    for (std::int64_t i = 0; i < n; ++i) {
      const double l = amplification_rv_sample(RandomizerSpec{LaplaceSpec{1.0}},
                                               0.5, 0.0, 1.0, rng);
      REQUIRE(l >= p.b_minus - 1e-9);
      REQUIRE(l <= p.b_plus + 1e-9);
    }
  }
}

TEST_CASE("profile preconditions") {
  CHECK_THROWS_AS(profile_generic(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(profile_generic(1.0, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(profile_krr(1, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(profile_laplace(0.0, 0.5), std::invalid_argument);
}

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

// Command-line front-end: calibration, Figure-style sweeps, oracle soundness
// checks, and protocol simulation. All output is deterministic CSV with '.'
// decimal separator and 17 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shuffledp/shuffledp.hpp"

namespace {

using namespace shuffledp;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct NamedMethod {
  std::string name;
  BoundMethod method;
};

NamedMethod parse_method(const std::string& name, std::int64_t k) {
  if (name == "efmrtt")
    return {name, {BoundTag::kEfmrtt, MechanismFamily::kGeneric}};
  if (name == "hoeffding-generic")
    return {name, {BoundTag::kHoeffdingClosed, MechanismFamily::kGeneric}};
  if (name == "bennett-generic")
    return {name, {BoundTag::kBennettMixture, MechanismFamily::kGeneric}};
  if (name == "hoeffding-rr")
    return {name, {BoundTag::kHoeffdingClosed, MechanismFamily::kKrr, k}};
  if (name == "bennett-rr")
    return {name, {BoundTag::kBennettMixture, MechanismFamily::kKrr, k}};
  if (name == "hoeffding-laplace")
    return {name, {BoundTag::kHoeffdingClosed, MechanismFamily::kLaplace}};
  if (name == "bennett-laplace")
    return {name, {BoundTag::kBennettMixture, MechanismFamily::kLaplace}};
  throw std::invalid_argument(
      "unknown method '" + name +
      "' (expected one of: efmrtt, hoeffding-generic, bennett-generic, "
      "hoeffding-rr, bennett-rr, hoeffding-laplace, bennett-laplace)");
}

double gamma_for(const BoundMethod& m, double eps0) {
  switch (m.tag) {
    case BoundTag::kEfmrtt:
      return std::numeric_limits<double>::quiet_NaN();
    default:
      break;
  }
  switch (m.family) {
    case MechanismFamily::kGeneric: return gamma_lower_bound(eps0);
    case MechanismFamily::kKrr: return gamma(RandomizerSpec{KrrSpec{m.k, eps0}});
    case MechanismFamily::kLaplace:
      return gamma(RandomizerSpec{LaplaceSpec{eps0}});
  }
  return std::numeric_limits<double>::quiet_NaN();
}

constexpr const char* kSweepHeader =
    "n,epsilon0,epsilon,delta,method,gamma,certified_by";

struct SweepRow {
  std::int64_t n;
  double epsilon0;
  double epsilon;
  double delta;
  std::string method;
  double gamma;
  std::string certified_by;

  std::string csv() const {
    std::ostringstream os;
    os << n << ',' << fmt(epsilon0) << ',' << fmt(epsilon) << ',' << fmt(delta)
       << ',' << method << ',' << fmt(gamma) << ',' << certified_by;
    return os.str();
  }
};

// Evaluates one calibration cell; infeasible cells become rows instead of
// errors so sweeps can cover full grids.
SweepRow eval_cell(const NamedMethod& nm, std::int64_t n, double delta,
                   std::optional<double> eps0_fixed,
                   std::optional<double> eps_fixed) {
  SweepRow row;
  row.n = n;
  row.delta = delta;
  row.method = nm.name;
  const double inf = std::numeric_limits<double>::infinity();
  try {
    if (eps0_fixed) {
      row.epsilon0 = *eps0_fixed;
      row.gamma = gamma_for(nm.method, *eps0_fixed);
      const CalibrationResult r =
          calibrate_epsilon(nm.method, *eps0_fixed, n, delta);
      if (!r.feasible) {
        row.epsilon = inf;
        row.certified_by = "infeasible";
      } else {
        row.epsilon = r.value;
        row.certified_by = r.clamped ? "clamp" : "amplification";
      }
    } else {
      row.epsilon = *eps_fixed;
      const CalibrationResult r =
          calibrate_epsilon0(nm.method, n, {*eps_fixed, delta});
      if (!r.feasible) {
        row.epsilon0 = inf;
        row.gamma = std::numeric_limits<double>::quiet_NaN();
        row.certified_by = "infeasible";
      } else {
        row.epsilon0 = r.value;
        row.gamma = gamma_for(nm.method, r.value);
        row.certified_by = "amplification";
      }
    }
  } catch (const infeasible_error&) {
    if (eps0_fixed) {
      row.epsilon0 = *eps0_fixed;
      row.epsilon = inf;
    } else {
      row.epsilon = *eps_fixed;
      row.epsilon0 = inf;
    }
    row.gamma = std::numeric_limits<double>::quiet_NaN();
    row.certified_by = "infeasible";
  }
  return row;
}

int cmd_calibrate(const std::string& method_name, std::int64_t k,
                  std::optional<double> eps0, std::optional<double> eps,
                  std::int64_t n, double delta) {
  if (eps0.has_value() == eps.has_value()) {
    std::cerr << "calibrate: exactly one of --eps0 and --eps must be given\n";
    return kExitInvalid;
  }
  const NamedMethod nm = parse_method(method_name, k);
  // Surface validity errors (e.g. the EFMRTT gates) as diagnostics rather
  // than infeasible rows.
  if (eps0)
    (void)calibrate_epsilon(nm.method, *eps0, n, delta);
  else
    (void)calibrate_epsilon0(nm.method, n, {*eps, delta});
  const SweepRow row = eval_cell(nm, n, delta, eps0, eps);
  if (row.certified_by == "infeasible") {
    std::cerr << "calibrate: infeasible for method " << nm.name << "\n";
    return kExitInvalid;
  }
  std::cout << kSweepHeader << "\n" << row.csv() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::vector<std::string>& methods,
              const std::vector<std::int64_t>& n_grid, std::int64_t k,
              std::optional<double> eps0, std::optional<double> eps,
              double delta, const std::string& out_path) {
  if (eps0.has_value() == eps.has_value()) {
    std::cerr << "sweep: exactly one of --eps0 and --eps must be given\n";
    return kExitInvalid;
  }
  if (methods.empty() || n_grid.empty()) {
    std::cerr << "sweep: methods and n-grid must be nonempty\n";
    return kExitInvalid;
  }
  std::vector<NamedMethod> named;
  named.reserve(methods.size());
  for (const auto& m : methods) named.push_back(parse_method(m, k));

  std::vector<SweepRow> rows(named.size() * n_grid.size());
  detail::parallel_for(
      static_cast<std::int64_t>(rows.size()),
      static_cast<int>(std::thread::hardware_concurrency()),
      [&](std::int64_t idx) {
        const std::size_t mi = static_cast<std::size_t>(idx) / n_grid.size();
        const std::size_t ni = static_cast<std::size_t>(idx) % n_grid.size();
        rows[static_cast<std::size_t>(idx)] =
            eval_cell(named[mi], n_grid[ni], delta, eps0, eps);
      });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.method != b.method) return a.method < b.method;
                     return a.n < b.n;
                   });
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "sweep: cannot open " << out_path << "\n";
    return kExitInvalid;
  }
  out << kSweepHeader << "\n";
  for (const auto& r : rows) out << r.csv() << "\n";
  return kExitOk;
}

int cmd_oracle(std::int64_t n_max, const std::vector<std::int64_t>& k_set,
               const std::vector<double>& eps0_grid,
               const std::vector<double>& eps_fractions) {
  if (n_max > 10) {
    std::cerr << "oracle: --n-max above the exact-enumeration cap (10)\n";
    return kExitInvalid;
  }
  std::cout << "n,k,eps0,eps,exact,mixture_exact,hoeffding,bennett\n";
  std::vector<std::string> violations;
  const double slack = 1e-12;
  for (std::int64_t n = 2; n <= n_max; ++n) {
    for (std::int64_t k : k_set) {
      for (double eps0 : eps0_grid) {
        for (double frac : eps_fractions) {
          const double eps = frac * eps0;
          const double exact = exact_shuffled_divergence_krr(n, k, eps0, eps);
          const double mixture = exact_mixture_delta_krr(n, k, eps0, eps);
          double hoeff = 1.0;
          double benn = 1.0;
          if (eps > 0.0) {
            const BlanketProfile p = profile_krr(k, eps0, eps);
            hoeff = delta_hoeffding_mixture(n, p);
            benn = delta_bennett_mixture(n, p);
          }
          std::cout << n << ',' << k << ',' << fmt(eps0) << ',' << fmt(eps)
                    << ',' << fmt(exact) << ',' << fmt(mixture) << ','
                    << fmt(hoeff) << ',' << fmt(benn) << "\n";
          const bool ok = exact <= mixture + slack && mixture <= hoeff + slack &&
                          exact <= benn + slack;
          if (!ok) {
            std::ostringstream os;
            os << "n=" << n << " k=" << k << " eps0=" << fmt(eps0)
               << " eps=" << fmt(eps) << " exact=" << fmt(exact)
               << " mixture=" << fmt(mixture) << " hoeffding=" << fmt(hoeff)
               << " bennett=" << fmt(benn);
            violations.push_back(os.str());
          }
        }
      }
    }
  }
  if (!violations.empty()) {
    std::cerr << "oracle: sandwich violated in " << violations.size()
              << " cell(s):\n";
    for (const auto& v : violations) std::cerr << "  " << v << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_simulate(std::int64_t n, double eps, double delta, std::int64_t trials,
                 const std::string& dist_name, std::uint64_t seed, int threads) {
  InputDist dist;
  if (dist_name == "constant0") dist = InputDist::kConstant0;
  else if (dist_name == "constant1") dist = InputDist::kConstant1;
  else if (dist_name == "uniform") dist = InputDist::kUniform;
  else if (dist_name == "grid") dist = InputDist::kGrid;
  else if (dist_name == "twopoint") dist = InputDist::kTwoPoint;
  else {
    std::cerr << "simulate: unknown --dist '" << dist_name
              << "' (constant0, constant1, uniform, grid, twopoint)\n";
    return kExitInvalid;
  }
  const ExperimentReport rep =
      mse_experiment(n, dist, trials, eps, delta, seed, threads);
  std::cout << "n,eps,delta,trials,empirical_mse,empirical_bias,"
               "theoretical_bound,seed\n";
  std::cout << n << ',' << fmt(eps) << ',' << fmt(delta) << ',' << trials << ','
            << fmt(rep.empirical_mse) << ',' << fmt(rep.empirical_bias) << ','
            << fmt(rep.theoretical_bound) << ',' << seed << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shuffle-model differential privacy: bounds, calibration, "
               "oracle checks, and protocol simulation"};
  app.require_subcommand(1);

  // calibrate
  auto* cal = app.add_subcommand(
      "calibrate", "calibrate epsilon (given --eps0) or epsilon0 (given --eps)");
  std::string cal_method;
  std::int64_t cal_k = 2;
  double cal_eps0 = 0.0, cal_eps = 0.0;
  std::int64_t cal_n = 0;
  double cal_delta = 0.0;
  cal->add_option("--method", cal_method, "bound method")->required();
  cal->add_option("--k", cal_k, "randomized-response domain size");
  auto* cal_eps0_opt = cal->add_option("--eps0", cal_eps0, "fixed local budget");
  auto* cal_eps_opt = cal->add_option("--eps", cal_eps, "fixed central epsilon");
  cal->add_option("--n", cal_n, "number of users")->required();
  cal->add_option("--delta", cal_delta, "target delta")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "one calibration row per (n, method)");
  std::vector<std::string> sw_methods;
  std::vector<std::int64_t> sw_n_grid;
  std::int64_t sw_k = 2;
  double sw_eps0 = 0.0, sw_eps = 0.0, sw_delta = 0.0;
  std::string sw_out;
  sw->add_option("--methods", sw_methods, "comma-separated method list")
      ->required()
      ->delimiter(',');
  sw->add_option("--n-grid", sw_n_grid, "comma-separated n values")
      ->required()
      ->delimiter(',');
  sw->add_option("--k", sw_k, "randomized-response domain size");
  auto* sw_eps0_opt = sw->add_option("--eps0", sw_eps0, "fixed local budget");
  auto* sw_eps_opt = sw->add_option("--eps", sw_eps, "fixed central epsilon");
  sw->add_option("--delta", sw_delta, "target delta")->required();
  sw->add_option("--out", sw_out, "output CSV file")->required();

  // oracle
  auto* orc = app.add_subcommand(
      "oracle", "exact-vs-bound sandwich sweep; exit 1 on any violation");
  std::int64_t orc_n_max = 8;
  std::vector<std::int64_t> orc_k_set{2, 3};
  std::vector<double> orc_eps0_grid{0.5, 1.0, 2.0};
  std::vector<double> orc_eps_grid{0.1, 0.3, 0.7};
  orc->add_option("--n-max", orc_n_max, "largest n (cap 10)");
  orc->add_option("--k-set", orc_k_set, "domain sizes")->delimiter(',');
  orc->add_option("--eps0-grid", orc_eps0_grid, "local budgets")->delimiter(',');
  orc->add_option("--eps-grid", orc_eps_grid,
                  "central eps as fractions of eps0")
      ->delimiter(',');

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo protocol run");
  std::int64_t sim_n = 0, sim_trials = 0;
  double sim_eps = 0.0, sim_delta = 0.0;
  std::string sim_dist = "uniform";
  std::uint64_t sim_seed = 0;
  int sim_threads = 1;
  sim->add_option("--n", sim_n, "number of users")->required();
  sim->add_option("--eps", sim_eps, "target epsilon")->required();
  sim->add_option("--delta", sim_delta, "target delta")->required();
  sim->add_option("--trials", sim_trials, "number of trials")->required();
  sim->add_option("--dist", sim_dist,
                  "input distribution (constant0, constant1, uniform, grid, "
                  "twopoint)");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--threads", sim_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (cal->parsed()) {
      std::optional<double> e0, e;
      if (cal_eps0_opt->count()) e0 = cal_eps0;
      if (cal_eps_opt->count()) e = cal_eps;
      return cmd_calibrate(cal_method, cal_k, e0, e, cal_n, cal_delta);
    }
    if (sw->parsed()) {
      std::optional<double> e0, e;
      if (sw_eps0_opt->count()) e0 = sw_eps0;
      if (sw_eps_opt->count()) e = sw_eps;
      return cmd_sweep(sw_methods, sw_n_grid, sw_k, e0, e, sw_delta, sw_out);
    }
    if (orc->parsed())
      return cmd_oracle(orc_n_max, orc_k_set, orc_eps0_grid, orc_eps_grid);
    if (sim->parsed())
      return cmd_simulate(sim_n, sim_eps, sim_delta, sim_trials, sim_dist,
                          sim_seed, sim_threads);
  } catch (const infeasible_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

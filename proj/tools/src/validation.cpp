// Copyright 2026 The qkinfer Authors
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

#include "qkinfer/cli/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qkinfer/cli/commands.hpp"
#include "qkinfer/cli/dataset.hpp"
#include "qkinfer/coefkit.hpp"
#include "qkinfer/costmodel.hpp"
#include "qkinfer/estimate.hpp"
#include "qkinfer/featuremap.hpp"
#include "qkinfer/harness.hpp"
#include "qkinfer/oracles.hpp"
#include "qkinfer/strategies.hpp"

namespace qkinfer::cli {

namespace {

// Tolerances and targets of the acceptance criteria.
constexpr double kExactnessTol = 1e-10;
constexpr double kBackendTol = 1e-9;
constexpr double kSamplingSlope = -0.5;
constexpr double kSamplingSlopeTol = 0.1;
constexpr double kQaeSlope = -1.0;
constexpr double kQaeSlopeTol = 0.15;
constexpr double kCoverageTarget = 2.0 / 3.0;
constexpr double kCoverageEpsilon = 0.05;
constexpr std::size_t kCoverageTrials = 500;
constexpr double kSamplingQuerySlope = 2.0;
constexpr double kSamplingQuerySlopeTol = 0.1;
constexpr double kQaeQuerySlope = 1.0;
constexpr double kQaeQuerySlopeTol = 0.15;
constexpr double kNIndependenceTol = 0.10;
constexpr double kAllocationSlack = 0.05;
constexpr double kNormRelTol = 1e-12;

struct CriterionInfo {
  const char* name;
  double limit;
};

constexpr CriterionInfo kCriteria[kNumCriteria] = {
    {"exact observable encoding", 30.0},
    {"amplitude encoding", 30.0},
    {"grover backend equivalence", 60.0},
    {"sampling error rate", 120.0},
    {"amplitude estimation error rate", 300.0},
    {"precision contract", 600.0},
    {"query scaling in epsilon", 600.0},
    {"all-at-once qae independent of N", 120.0},
    {"allocation optimality", 120.0},
    {"norm and sandwich identities", 5.0},
    {"recommender verdicts", 5.0},
    {"benchmark determinism", 60.0},
};

std::string fmt(const char* pattern, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string fmt2(const char* pattern, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::filesystem::path fixture(const ValidationConfig& cfg, const std::string& name) {
  return cfg.data_dir / "fixtures" / name;
}

constexpr const char* kDefaultFixture = "default_n3_N8.json";

// Random instance with n <= 4 and N <= 8, occasionally with zero weights.
Instance random_instance(SeededStream& rng) {
  GeneratorOptions o;
  const double f = rng.uniform();
  o.family = f < 0.45   ? FeatureFamily::kAngleRyCz
             : f < 0.9 ? FeatureFamily::kAngleRzRxRing
                        : FeatureFamily::kIdentity;
  o.num_qubits = 1 + rng() % 4;
  o.num_layers = 1 + rng() % 2;
  o.num_terms = 1 + rng() % 8;
  o.num_test_inputs = 1;
  o.seed = rng();
  o.heavy_tailed = rng.uniform() < 0.5;
  DatasetFile d = generate_dataset(o);
  if (d.alpha.size() > 1 && rng.uniform() < 0.25) d.alpha[rng() % d.alpha.size()] = 0.0;
  if (rng.uniform() < 0.3) d.test_inputs[0] = d.training[rng() % d.training.size()].x;
  return d.instance();
}

Outcome criterion_exact_observable(const ValidationConfig& cfg) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    SeededStream rng(SeededStream::derive({cfg.seed, 1, i}));
    const Instance inst = random_instance(rng);
    const AllAtOnceCircuit c = build_all_at_once(inst.spec, inst.x, inst.alpha, inst.training);
    const double e = c.measurement.expectation(apply(c.circuit, QuantumState(c.layout.width())));
    worst = std::max(worst, std::abs(e - f_exact(inst.spec, inst.alpha, inst.training, inst.x)));
  }
  return {worst <= kExactnessTol, fmt("max |expectation - f_exact| = %.3g over 200 instances", worst)};
}

Outcome criterion_amplitude_encoding(const ValidationConfig& cfg) {
  double worst = 0.0;
  double worst_sum = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    SeededStream rng(SeededStream::derive({cfg.seed, 1, i}));
    const Instance inst = random_instance(rng);
    const AmplitudeEncodingCircuit v = build_V(inst.spec, inst.x, inst.alpha, inst.training);
    const QuantumState s = apply(v.circuit, QuantumState(v.layout.width()));
    const SignedParts parts = f_plus_minus_exact(decompose(inst.alpha),
                                                 kernel_row(inst.spec, inst.training, inst.x));
    const double pp = projector_probability(s, v.good_plus);
    const double pm = projector_probability(s, v.good_minus);
    worst = std::max({worst, std::abs(pp - parts.f_plus), std::abs(pm - parts.f_minus)});
    worst_sum = std::max(worst_sum, pp + pm);
  }
  return {worst <= kExactnessTol && worst_sum <= 1.0 + kExactnessTol,
          fmt2("max branch error = %.3g, max f+ + f- = %.15g", worst, worst_sum)};
}

Circuit random_circuit(std::size_t width, std::size_t gates, SeededStream& rng) {
  Circuit c(width);
  for (std::size_t g = 0; g < gates; ++g) {
    const std::size_t q = rng() % width;
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    const std::size_t kind = rng() % (width > 1 ? 8 : 5);
    switch (kind) {
      case 0: c.add(Gate::rx(q, angle)); break;
      case 1: c.add(Gate::ry(q, angle)); break;
      case 2: c.add(Gate::rz(q, angle)); break;
      case 3: c.add(Gate::h(q)); break;
      case 4: c.add(Gate::x(q)); break;
      default: {
        const std::size_t t = (q + 1 + rng() % (width - 1)) % width;
        if (kind == 5) c.add(Gate::cnot(q, t));
        else if (kind == 6) c.add(Gate::cz(q, t));
        else c.add(Gate::mcx({Control{q, rng.uniform() < 0.5}}, t));
      }
    }
  }
  return c;
}

Outcome criterion_backend_equivalence(const ValidationConfig& cfg) {
  double worst = 0.0;
  std::size_t preps = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    SeededStream rng(SeededStream::derive({cfg.seed, 3, i}));
    Circuit prep(1);
    ProjectorSpec good;
    if (i % 2 == 0) {
      const std::size_t width = 1 + rng() % 6;
      prep = random_circuit(width, 5 + rng() % 26, rng);
      const std::size_t constraints = 1 + rng() % width;
      for (std::size_t c = 0; c < constraints; ++c) good.require(c, rng.uniform() < 0.5);
    } else {
      Instance inst = random_instance(rng);
      while (RegisterLayout::amplitude_encoding(inst.spec.num_qubits, inst.training.size()).width() > 10) {
        inst = random_instance(rng);
      }
      AmplitudeEncodingCircuit v = build_V(inst.spec, inst.x, inst.alpha, inst.training);
      good = rng.uniform() < 0.5 ? v.good_plus : v.good_minus;
      prep = std::move(v.circuit);
    }
    const GroverSpec analytic(prep, good, GroverBackend::kAnalytic2d);
    const GroverSpec full = analytic.with_backend(GroverBackend::kFullstate);
    for (std::uint64_t k = 0; k <= 8; ++k) {
      worst = std::max(worst, std::abs(analytic.good_probability(k) - full.good_probability(k)));
    }
    ++preps;
  }
  return {worst <= kBackendTol,
          fmt2("max |analytic2d - fullstate| = %.3g over %.0f preps, k <= 8", worst,
               static_cast<double>(preps))};
}

Outcome criterion_sampling_rate(const ValidationConfig& cfg) {
  const PreparedInstance prep(load_dataset(fixture(cfg, kDefaultFixture)).instance());
  // Amplitude-encoding branch probability of the fixture.
  const GroverSpec& v = prep.v_plus();
  const double p = v.amplitude() * v.amplitude();
  std::vector<std::pair<double, double>> pts;
  for (int e = 8; e <= 16; ++e) {
    const auto m = std::uint64_t{1} << e;
    double se = 0.0;
    for (std::size_t t = 0; t < 200; ++t) {
      SeededStream rng(SeededStream::derive({cfg.seed, 4, static_cast<std::uint64_t>(e), t}));
      const double p_hat =
          static_cast<double>(sample_bernoulli(p, m, rng)) / static_cast<double>(m);
      se += (p_hat - p) * (p_hat - p);
    }
    pts.emplace_back(static_cast<double>(m), std::sqrt(se / 200.0));
  }
  const SlopeFit fit = fit_loglog_slope(pts);
  return {std::abs(fit.slope - kSamplingSlope) <= kSamplingSlopeTol,
          fmt2("RMSE-vs-M slope %.4f (stderr %.3f), p = ", fit.slope, fit.stderr_slope) +
              fmt("%.4f", p)};
}

Outcome criterion_qae_rate(const ValidationConfig& cfg) {
  const PreparedInstance prep(load_dataset(fixture(cfg, kDefaultFixture)).instance());
  const GroverSpec& v = prep.v_plus();
  const double a = v.amplitude();
  QaeConfig qc{cfg.calibration.qae_shots_per_round, cfg.calibration.qae_min_ratio};
  std::vector<std::pair<double, double>> pts;
  double worst_constant = 0.0;
  const double delta = 0.1;
  const double eps_grid[] = {0.04, 0.02, 0.01, 0.005, 0.0025, 0.00125};
  for (std::size_t e = 0; e < std::size(eps_grid); ++e) {
    double se = 0.0;
    double queries = 0.0;
    for (std::size_t t = 0; t < 200; ++t) {
      SeededStream rng(SeededStream::derive({cfg.seed, 5, e, t}));
      const AmplitudeEstimate est = qae_estimate(v, eps_grid[e], delta, rng, qc);
      se += (est.value - a) * (est.value - a);
      const auto q = static_cast<double>(est.counter.total_queries());
      queries += q;
      worst_constant = std::max(worst_constant, q * eps_grid[e] / std::log(1.0 / delta));
    }
    pts.emplace_back(queries / 200.0, std::sqrt(se / 200.0));
  }
  const SlopeFit fit = fit_loglog_slope(pts);
  const bool bound = worst_constant <= cfg.calibration.c_qae;
  return {std::abs(fit.slope - kQaeSlope) <= kQaeSlopeTol && bound,
          fmt2("RMSE-vs-queries slope %.4f (stderr %.3f), a = ", fit.slope, fit.stderr_slope) +
              fmt("%.4f", a) + fmt(", measured C_qae = %.1f", worst_constant) +
              fmt(" (bound %.0f)", cfg.calibration.c_qae)};
}

Outcome criterion_precision_contract(const ValidationConfig& cfg) {
  const PreparedInstance prep(load_dataset(fixture(cfg, kDefaultFixture)).instance());
  InferenceOptions opt;
  opt.epsilon = kCoverageEpsilon;
  opt.calibration = cfg.calibration;
  bool ok = true;
  std::string detail;
  for (StrategyId s : kAllStrategies) {
    const double c = coverage(s, prep, opt, kCoverageTrials, cfg.seed);
    ok = ok && c >= kCoverageTarget;
    detail += std::string(detail.empty() ? "" : ", ") + std::string(strategy_name(s)) +
              fmt(" %.3f", c);
  }
  return {ok, "coverage at eps=0.05: " + detail};
}

Outcome criterion_query_scaling(const ValidationConfig& cfg) {
  ExperimentPlan plan(load_dataset(fixture(cfg, kDefaultFixture)).instance());
  plan.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
  plan.epsilon_grid = {0.1, 0.05, 0.025, 0.0125};
  plan.trials = 20;
  plan.base_seed = cfg.seed;
  plan.calibration = cfg.calibration;
  const ExperimentResult r = run_plan(plan);
  bool ok = r.query_slopes.size() == kNumStrategies;
  std::string detail;
  for (const auto& s : r.query_slopes) {
    const bool qae = uses_qae(s.strategy);
    const double target = qae ? kQaeQuerySlope : kSamplingQuerySlope;
    const double tol = qae ? kQaeQuerySlopeTol : kSamplingQuerySlopeTol;
    ok = ok && std::abs(s.fit.slope - target) <= tol;
    detail += std::string(detail.empty() ? "" : ", ") + std::string(strategy_name(s.strategy)) +
              fmt(" %.3f", s.fit.slope);
  }
  return {ok, "slopes: " + detail};
}

double mean_aao_queries(std::size_t num_terms, const ValidationConfig& cfg) {
  constexpr std::size_t kInstances = 20;
  constexpr std::size_t kTrials = 25;
  constexpr double kL1 = 2.0;
  double total = 0.0;
  InferenceOptions opt;
  opt.epsilon = 0.05;
  opt.calibration = cfg.calibration;
  for (std::size_t i = 0; i < kInstances; ++i) {
    GeneratorOptions o;
    o.num_qubits = 2;
    o.num_layers = 1;
    o.num_terms = num_terms;
    o.num_test_inputs = 1;
    o.heavy_tailed = false;
    o.seed = SeededStream::derive({cfg.seed, 8, num_terms, i});
    DatasetFile d = generate_dataset(o);
    double l1 = 0.0;
    for (double a : d.alpha) l1 += std::abs(a);
    for (double& a : d.alpha) a *= kL1 / l1;
    const PreparedInstance prep(d.instance());
    for (std::size_t t = 0; t < kTrials; ++t) {
      const std::uint64_t seed = SeededStream::derive({cfg.seed, 8, num_terms, i, t});
      total += static_cast<double>(infer(StrategyId::kAaoQae, prep, opt, seed).total_queries());
    }
  }
  return total / static_cast<double>(kInstances * kTrials);
}

Outcome criterion_n_independence(const ValidationConfig& cfg) {
  const double q4 = mean_aao_queries(4, cfg);
  const double q8 = mean_aao_queries(8, cfg);
  const double change = std::abs(q8 - q4) / q4;
  return {change < kNIndependenceTol,
          fmt2("mean queries N=4: %.1f, N=8: %.1f", q4, q8) + fmt(", relative change %.4f", change)};
}

constexpr double kAllocationEpsilons[] = {0.05, 0.025, 0.0125};

Outcome criterion_allocation(const ValidationConfig& cfg) {
  double worst = 0.0;
  bool feasible = true;
  for (std::size_t i = 0; i < 10; ++i) {
    SeededStream rng(SeededStream::derive({cfg.seed, 9, i}));
    std::vector<double> alpha(3);
    for (double& a : alpha) a = 2.0 * rng.uniform() - 1.0;
    const CoefDecomposition d = decompose(CoefficientVector(alpha));
    for (int r : {1, 2}) for (double eps : kAllocationEpsilons) {
      const double delta = 1.0 / 3.0;
      const BudgetAllocation lagrange = allocate_budget(d, eps, delta, r);
      feasible = feasible && allocation_variance(d, lagrange, r) <= variance_budget(eps, delta);
      const std::uint64_t m_max =
          2 * *std::max_element(lagrange.per_index.begin(), lagrange.per_index.end()) + 16;
      const BudgetAllocation brute = bruteforce_allocation(d, eps, delta, r, m_max);
      const double gap = 1.0 - static_cast<double>(brute.total) / static_cast<double>(lagrange.total);
      worst = std::max(worst, gap);
    }
  }
  return {feasible && worst <= kAllocationSlack,
          fmt("largest brute-force saving over the closed form: %.4f", worst) +
              (feasible ? "" : " (closed form infeasible)")};
}

Outcome criterion_norms(const ValidationConfig& cfg) {
  std::size_t violations = 0;
  std::size_t sandwich_out = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    SeededStream rng(SeededStream::derive({cfg.seed, 10, i}));
    const std::size_t N = 1 + rng() % 64;
    std::vector<double> alpha(N);
    for (double& a : alpha) a = (2.0 * rng.uniform() - 1.0) * std::pow(10.0, 4.0 * rng.uniform() - 2.0);
    if (i % 10 == 0) std::fill(alpha.begin(), alpha.end(), 0.5);
    if (i % 10 == 1) {
      std::fill(alpha.begin(), alpha.end(), 0.0);
      alpha[rng() % N] = -1.5;
    }
    const CoefficientVector v(alpha);
    const double l1 = pnorm(v, 1.0);
    const double l2 = pnorm(v, 2.0);
    const double l23 = pnorm(v, kTwoThirds);
    const double rn = std::sqrt(static_cast<double>(N));
    const double tol = 1.0 + kNormRelTol;
    if (!(l2 <= l1 * tol && l1 <= rn * l2 * tol && l1 <= l23 * tol && l23 <= rn * l1 * tol)) {
      ++violations;
    }
    const GateCostModel model{1 + rng() % 200, N, 1 + rng() % 8};
    if (!sandwich_check(model, decompose(v)).inside) ++sandwich_out;
  }
  return {violations == 0 && sandwich_out == 0,
          fmt2("norm-chain violations %.0f, sandwich violations %.0f over 1000 vectors",
               static_cast<double>(violations), static_cast<double>(sandwich_out))};
}

Outcome criterion_recommender(const ValidationConfig& cfg) {
  std::size_t tested = 0;
  std::size_t wrong = 0;
  std::size_t outside = 0;
  const std::uint64_t g_grid[] = {1, 4, 16, 64, 256};
  const std::size_t n_grid[] = {1, 2, 4, 8, 16};
  const double eps_grid[] = {0.1, 0.01};
  for (std::uint64_t G : g_grid) {
    for (std::size_t N : n_grid) {
      for (double eps : eps_grid) {
        for (int shape = 0; shape < 2; ++shape) {
          SeededStream rng(SeededStream::derive({cfg.seed, 11, tested}));
          std::vector<double> alpha(N);
          for (double& a : alpha) {
            const double mag = shape == 0 ? 0.5 + rng.uniform()
                                          : 0.1 * std::pow(1.0 - rng.uniform(), -1.0 / 1.5);
            a = (rng.uniform() < 0.5 ? -1.0 : 1.0) * mag;
          }
          const GateCostModel model{G, N, 1 + tested % 8};
          const CoefDecomposition d = decompose(CoefficientVector(alpha));
          ++tested;
          if (!in_asymptotic_regime(d, eps)) {
            ++outside;
            continue;
          }
          try {
            const bool q = recommend(model, d, eps, Criterion::kQueries).winner == StrategyId::kAaoQae;
            const bool g =
                recommend(model, d, eps, Criterion::kGates).winner == StrategyId::kLsAdaptiveQae;
            if (!q || !g) ++wrong;
          } catch (const std::logic_error&) {
            ++wrong;
          }
        }
      }
    }
  }
  return {wrong == 0 && outside == 0,
          fmt2("%.0f grid points, %.0f wrong verdicts", static_cast<double>(tested),
               static_cast<double>(wrong)) +
              fmt(", %.0f outside the asymptotic regime", static_cast<double>(outside))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome criterion_determinism(const ValidationConfig& cfg) {
  std::vector<std::string> csv;
  std::vector<std::string> plot;
  for (const char* run : {"run_a", "run_b"}) {
    BenchmarkArgs args;
    args.dataset = fixture(cfg, kDefaultFixture);
    args.strategy = "all";
    args.epsilons = "0.1,0.05,0.025";
    args.trials = 3;
    args.seed = cfg.seed;
    args.out = cfg.scratch_dir / run;
    std::filesystem::remove_all(args.out);
    std::ostringstream out;
    std::ostringstream err;
    if (cmd_benchmark(args, out, err) != kExitOk) return {false, "benchmark failed: " + err.str()};
    csv.push_back(slurp(args.out / "results.csv"));
    plot.push_back(slurp(args.out / "plotdata.csv"));
  }
  const bool same = csv[0] == csv[1] && plot[0] == plot[1] && !csv[0].empty();
  return {same, fmt("two benchmark runs, %.0f CSV bytes each, ",
                    static_cast<double>(csv[0].size())) +
                    (same ? "identical" : "different")};
}

using CriterionFn = Outcome (*)(const ValidationConfig&);

constexpr CriterionFn kFns[kNumCriteria] = {
    criterion_exact_observable, criterion_amplitude_encoding, criterion_backend_equivalence,
    criterion_sampling_rate,    criterion_qae_rate,           criterion_precision_contract,
    criterion_query_scaling,    criterion_n_independence,     criterion_allocation,
    criterion_norms,            criterion_recommender,        criterion_determinism,
};

}  // namespace

std::vector<int> criteria_for_level(const std::string& level) {
  if (level == "fast") return {1, 2, 3};
  if (level == "full") {
    std::vector<int> all(kNumCriteria);
    for (int i = 0; i < kNumCriteria; ++i) all[i] = i + 1;
    return all;
  }
  throw std::invalid_argument("unknown validation level '" + level + "'; expected fast or full");
}

std::string criterion_name(int id) {
  if (id < 1 || id > kNumCriteria) throw std::invalid_argument("no criterion " + std::to_string(id));
  return kCriteria[id - 1].name;
}

double criterion_time_limit(int id) {
  if (id < 1 || id > kNumCriteria) throw std::invalid_argument("no criterion " + std::to_string(id));
  return kCriteria[id - 1].limit;
}

CriterionResult run_criterion(int id, const ValidationConfig& config) {
  CriterionResult r;
  r.id = id;
  r.name = criterion_name(id);
  r.limit_seconds = criterion_time_limit(id);
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = kFns[id - 1](config);
    r.passed = o.passed;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.seconds > r.limit_seconds) {
    r.passed = false;
    r.detail += fmt(" [exceeded the %.0f s limit]", r.limit_seconds);
  }
  return r;
}

std::string format_result(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "[%s] %2d  %-34s (%7.2f s)  ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace qkinfer::cli

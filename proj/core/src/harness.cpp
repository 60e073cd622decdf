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

#include "qkinfer/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qkinfer/errors.hpp"

namespace qkinfer {

std::uint64_t derive_trial_seed(std::uint64_t base_seed, StrategyId strategy,
                                std::size_t epsilon_index, std::size_t trial) noexcept {
  return SeededStream::derive({base_seed, static_cast<std::uint64_t>(strategy) + 1,
                               static_cast<std::uint64_t>(epsilon_index),
                               static_cast<std::uint64_t>(trial)});
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least three points");
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("slope fit needs positive coordinates");
    }
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const auto n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

ExperimentResult run_plan(const ExperimentPlan& plan) {
  if (plan.trials == 0) throw std::invalid_argument("plan needs at least one trial");
  if (plan.strategies.empty()) throw std::invalid_argument("plan has no strategies");
  if (plan.epsilon_grid.empty()) throw std::invalid_argument("plan has no epsilon values");
  for (double e : plan.epsilon_grid) {
    if (!(e > 0.0 && e <= 0.5)) {
      throw std::invalid_argument("epsilon " + std::to_string(e) + " outside (0, 0.5]");
    }
  }

  const PreparedInstance prepared(plan.instance, plan.backend);
  const std::size_t per_strategy = plan.epsilon_grid.size() * plan.trials;
  const std::size_t total = plan.strategies.size() * per_strategy;
  ExperimentResult result;
  result.rows.resize(total);

  auto run_cell = [&](std::size_t cell) {
    const StrategyId s = plan.strategies[cell / per_strategy];
    const std::size_t e = (cell % per_strategy) / plan.trials;
    const std::size_t t = cell % plan.trials;
    InferenceOptions opt;
    opt.epsilon = plan.epsilon_grid[e];
    opt.delta = plan.delta;
    opt.calibration = plan.calibration;
    const std::uint64_t seed = derive_trial_seed(plan.base_seed, s, e, t);
    const EstimateReport r = infer(s, prepared, opt, seed);
    result.rows[cell] = {s,          opt.epsilon,         seed,           r.estimate,
                         r.exact,    r.abs_error(),       r.total_queries(), r.modeled_gates};
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(plan.threads, total));
  if (workers == 1) {
    for (std::size_t c = 0; c < total; ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < total; c = next++) {
          try {
            run_cell(c);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  if (plan.epsilon_grid.size() >= 3) {
    for (std::size_t si = 0; si < plan.strategies.size(); ++si) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t e = 0; e < plan.epsilon_grid.size(); ++e) {
        double mean = 0.0;
        for (std::size_t t = 0; t < plan.trials; ++t) {
          mean += static_cast<double>(result.rows[si * per_strategy + e * plan.trials + t].total_queries);
        }
        pts.emplace_back(1.0 / plan.epsilon_grid[e], mean / static_cast<double>(plan.trials));
      }
      try {
        result.query_slopes.push_back({plan.strategies[si], fit_loglog_slope(pts)});
      } catch (const std::invalid_argument&) {
        // Repeated epsilon values leave the slope undefined.
      }
    }
  }
  return result;
}

namespace {

// Continuous minimum of sum M_j over the terms from `pos` on, given `room`.
double relaxed_rest(const std::vector<double>& a2, std::size_t pos, int r, double room) {
  double s = 0.0;
  for (std::size_t j = pos; j < a2.size(); ++j) s += r == 1 ? std::sqrt(a2[j]) : std::cbrt(a2[j]);
  return r == 1 ? s * s / room : std::pow(s, 1.5) / std::sqrt(room);
}

void search_allocation(const std::vector<double>& a2, std::size_t pos, int r, double C,
                       std::uint64_t m_max, double used, std::uint64_t partial,
                       const std::vector<std::uint64_t>& lower, std::vector<std::uint64_t>& cur,
                       std::vector<std::uint64_t>& best, std::uint64_t& best_total) {
  auto term = [r](double a, std::uint64_t m) {
    return a / std::pow(static_cast<double>(m), r);
  };
  const std::size_t last = a2.size() - 1;
  if (pos == last) {
    const double room = C - used;
    if (room <= 0.0) return;
    const double need = std::ceil(std::pow(a2[pos] / room, 1.0 / r));
    if (need > static_cast<double>(m_max) + 1.0) return;
    auto m = std::max<std::uint64_t>(static_cast<std::uint64_t>(need), 1);
    while (m > 1 && used + term(a2[pos], m - 1) <= C) --m;
    while (m <= m_max && used + term(a2[pos], m) > C) ++m;
    if (m > m_max) return;
    if (partial + m < best_total) {
      best_total = partial + m;
      cur[pos] = m;
      best = cur;
    }
    return;
  }
  std::uint64_t rest_lower = 0;
  for (std::size_t j = pos + 1; j < a2.size(); ++j) rest_lower += lower[j];
  if (used >= C) return;
  const double fit = std::floor(std::pow(a2[pos] / (C - used), 1.0 / r));
  if (fit > static_cast<double>(m_max)) return;
  const std::uint64_t first = std::max(lower[pos], static_cast<std::uint64_t>(fit));
  for (std::uint64_t m = first; m <= m_max; ++m) {
    if (partial + m + rest_lower >= best_total) break;
    const double u = used + term(a2[pos], m);
    if (u >= C) continue;
    // Small slack keeps rounding in the relaxation from pruning a tie.
    const double bound = relaxed_rest(a2, pos + 1, r, C - u) * (1.0 - 1e-9);
    const double reach = static_cast<double>(partial + m) + bound;
    if (reach >= static_cast<double>(best_total)) {
      // m + bound is convex in m, so once it rises past the incumbent it stays there.
      const double next_u = used + term(a2[pos], m + 1);
      const double next_reach =
          static_cast<double>(partial + m + 1) + relaxed_rest(a2, pos + 1, r, C - next_u);
      if (next_reach >= reach) break;
      continue;
    }
    cur[pos] = m;
    search_allocation(a2, pos + 1, r, C, m_max, u, partial + m, lower, cur, best, best_total);
  }
}

}  // namespace

BudgetAllocation bruteforce_allocation(const CoefDecomposition& decomp, double epsilon,
                                       double delta, int r, std::uint64_t m_max) {
  if (decomp.size() > 4) throw std::invalid_argument("brute-force allocation supports N <= 4");
  if (r != 1 && r != 2) throw std::invalid_argument("r must be 1 or 2");
  if (m_max == 0) throw std::invalid_argument("m_max must be positive");
  const double C = variance_budget(epsilon, delta);
  const std::vector<std::size_t> support = decomp.support();
  std::vector<double> a2;
  std::vector<std::uint64_t> lower;
  for (std::size_t i : support) {
    const double a = decomp.coefficient(i);
    a2.push_back(a * a);
    // Each term alone must fit under C.
    auto m = static_cast<std::uint64_t>(std::floor(std::pow(a * a / C, 1.0 / r)));
    lower.push_back(std::max<std::uint64_t>(1, m));
  }
  std::vector<std::uint64_t> cur(a2.size(), 0);
  // Incumbent: the continuous optimum rounded up, which is always feasible.
  std::vector<std::uint64_t> best;
  std::uint64_t best_total = UINT64_MAX;
  {
    const double rest = relaxed_rest(a2, 0, r, C);
    double weight_sum = 0.0;
    for (double a : a2) weight_sum += r == 1 ? std::sqrt(a) : std::cbrt(a);
    std::vector<std::uint64_t> seed;
    std::uint64_t total = 0;
    for (double a : a2) {
      const double w = r == 1 ? std::sqrt(a) : std::cbrt(a);
      seed.push_back(std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::ceil(rest * w / weight_sum))));
      total += seed.back();
    }
    double var = 0.0;
    for (std::size_t j = 0; j < a2.size(); ++j) var += a2[j] / std::pow(static_cast<double>(seed[j]), r);
    const bool within = std::all_of(seed.begin(), seed.end(), [&](auto m) { return m <= m_max; });
    if (var <= C && within) {
      best = seed;
      best_total = total + 1;
    }
  }
  search_allocation(a2, 0, r, C, m_max, 0.0, 0, lower, cur, best, best_total);
  if (best.empty()) {
    throw std::invalid_argument("no feasible allocation with M_i <= " + std::to_string(m_max));
  }
  BudgetAllocation out;
  out.per_index.assign(decomp.size(), 0);
  for (std::size_t j = 0; j < support.size(); ++j) out.per_index[support[j]] = best[j];
  out.total = 0;
  for (std::uint64_t m : best) out.total += m;
  return out;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const ExperimentResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ResultRow& r : result.rows) {
    out += strategy_name(r.strategy);
    out += ',' + fmt17(r.epsilon) + ',' + std::to_string(r.seed) + ',' + fmt17(r.estimate) + ',' +
           fmt17(r.exact) + ',' + fmt17(r.abs_error) + ',' + std::to_string(r.total_queries) +
           ',' + std::to_string(r.modeled_gates) + '\n';
  }
  return out;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw FormatError("csv: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 8) {
      throw FormatError("csv line " + std::to_string(lineno) + ": expected 8 fields");
    }
    try {
      ResultRow r;
      const auto id = parse_strategy(f[0]);
      if (!id) throw FormatError("csv line " + std::to_string(lineno) + ": unknown strategy");
      r.strategy = *id;
      std::size_t used = 0;
      auto num = [&](const std::string& s) {
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      auto uint = [&](const std::string& s) {
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return static_cast<std::uint64_t>(v);
      };
      r.epsilon = num(f[1]);
      r.seed = uint(f[2]);
      r.estimate = num(f[3]);
      r.exact = num(f[4]);
      r.abs_error = num(f[5]);
      r.total_queries = uint(f[6]);
      r.modeled_gates = uint(f[7]);
      rows.push_back(r);
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception&) {
      throw FormatError("csv line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

std::string to_plotdata(const ExperimentResult& result) {
  struct Cell {
    std::vector<double> errors;
    std::vector<double> queries;
  };
  // Keyed by first appearance so the output order follows the rows.
  std::vector<std::pair<StrategyId, double>> order;
  std::map<std::pair<std::size_t, double>, Cell> cells;
  for (const ResultRow& r : result.rows) {
    const auto key = std::make_pair(static_cast<std::size_t>(r.strategy), r.epsilon);
    if (!cells.count(key)) order.emplace_back(r.strategy, r.epsilon);
    cells[key].errors.push_back(r.estimate - r.exact);
    cells[key].queries.push_back(static_cast<double>(r.total_queries));
  }
  std::string budget = "";
  std::string eps = "";
  for (const auto& [s, e] : order) {
    const Cell& c = cells[{static_cast<std::size_t>(s), e}];
    const auto n = static_cast<double>(c.errors.size());
    double mse = 0.0;
    double mean_q = 0.0;
    for (double v : c.errors) mse += v * v;
    for (double q : c.queries) mean_q += q;
    mse /= n;
    mean_q /= n;
    double var_sq = 0.0;
    double var_q = 0.0;
    for (double v : c.errors) var_sq += (v * v - mse) * (v * v - mse);
    for (double q : c.queries) var_q += (q - mean_q) * (q - mean_q);
    const double rmse = std::sqrt(mse);
    const double se_mse = n > 1 ? std::sqrt(var_sq / (n - 1) / n) : 0.0;
    const double rmse_err = rmse > 0.0 ? se_mse / (2.0 * rmse) : 0.0;
    const double q_err = n > 1 ? std::sqrt(var_q / (n - 1) / n) : 0.0;
    const std::string name(strategy_name(s));
    budget += "error_vs_budget," + name + ',' + fmt17(mean_q) + ',' + fmt17(rmse) + ',' +
              fmt17(rmse_err) + '\n';
    eps += "queries_vs_epsilon," + name + ',' + fmt17(e) + ',' + fmt17(mean_q) + ',' +
           fmt17(q_err) + '\n';
  }
  return "curve,strategy,x,y,yerr\n" + budget + eps;
}

std::filesystem::path emit(const ExperimentResult& result, EmitFormat format,
                           const std::filesystem::path& dir) {
  if (result.rows.empty()) throw std::invalid_argument("emit: result has no rows");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
  const std::filesystem::path path =
      dir / (format == EmitFormat::kCsv ? "results.csv" : "plotdata.csv");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << (format == EmitFormat::kCsv ? to_csv(result) : to_plotdata(result));
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
  return path;
}

double coverage(StrategyId strategy, const PreparedInstance& prepared,
                const InferenceOptions& options, std::size_t trials, std::uint64_t base_seed) {
  if (trials == 0) throw std::invalid_argument("coverage needs at least one trial");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const EstimateReport r =
        infer(strategy, prepared, options, derive_trial_seed(base_seed, strategy, 0, t));
    if (r.abs_error() <= options.epsilon) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double calibrate_multiplier(StrategyId strategy, const PreparedInstance& prepared, double epsilon,
                            double delta, std::size_t trials, double target,
                            std::uint64_t base_seed, Calibration base) {
  constexpr double kLadder[] = {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0, 2.0, 4.0};
  InferenceOptions opt;
  opt.epsilon = epsilon;
  opt.delta = delta;
  opt.calibration = base;
  for (double m : kLadder) {
    opt.calibration.multipliers[static_cast<std::size_t>(strategy)] = m;
    if (coverage(strategy, prepared, opt, trials, base_seed) >= target) return m;
  }
  return kLadder[std::size(kLadder) - 1];
}

}  // namespace qkinfer

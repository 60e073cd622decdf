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

#include "qkinfer/cli/commands.hpp"

#include <cstdio>
#include <iostream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qkinfer/cli/dataset.hpp"
#include "qkinfer/cli/validation.hpp"
#include "qkinfer/costmodel.hpp"
#include "qkinfer/errors.hpp"
#include "qkinfer/harness.hpp"
#include "qkinfer/strategies.hpp"

#ifndef QKINFER_DEFAULT_DATA_DIR
#define QKINFER_DEFAULT_DATA_DIR "data"
#endif

namespace qkinfer::cli {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<StrategyId> parse_strategies(const std::string& text) {
  if (text == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
  std::vector<StrategyId> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto id = parse_strategy(name);
    if (!id) throw FormatError("unknown strategy '" + name + "'; expected one of " + strategy_list_help());
    out.push_back(*id);
  }
  if (out.empty()) throw FormatError("no strategy given");
  return out;
}

GroverBackend parse_backend_or_throw(const std::string& name) {
  const auto b = parse_backend(name);
  if (!b) throw FormatError("unknown backend '" + name + "'; expected analytic2d or fullstate");
  return *b;
}

Instance load_instance(const std::filesystem::path& path, const std::optional<std::string>& x) {
  const DatasetFile d = load_dataset(path);
  if (x) return d.instance(DataPoint{parse_real_list(*x)});
  return d.instance();
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const WidthOverflowError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

void print_report(const EstimateReport& r, std::ostream& out) {
  out << "strategy: " << strategy_name(r.strategy) << '\n'
      << "epsilon: " << fmt17(r.epsilon_target) << '\n'
      << "delta: " << fmt17(r.delta) << '\n'
      << "seed: " << r.seed << '\n'
      << "estimate: " << fmt17(r.estimate) << '\n'
      << "exact: " << fmt17(r.exact) << '\n'
      << "abs_error: " << fmt17(r.abs_error()) << '\n'
      << "sign: " << (sign_of(r) > 0 ? "+1" : "-1") << '\n'
      << "total_queries: " << r.total_queries() << '\n'
      << "gates_per_query: " << r.gates_per_query << '\n'
      << "modeled_gates: " << r.modeled_gates << '\n';
  for (OracleKind k : {OracleKind::kUx, OracleKind::kW, OracleKind::kODagger, OracleKind::kV,
                       OracleKind::kVDagger}) {
    out << "queries[" << oracle_name(k) << "]: " << r.counter[k] << '\n';
  }
  if (r.allocation) {
    out << "allocation:";
    for (std::uint64_t m : r.allocation->per_index) out << ' ' << m;
    out << '\n';
  }
  if (r.below_precision_runs > 0) {
    out << "warning: " << r.below_precision_runs
        << " amplitude estimate(s) fell below their target precision\n";
  }
}

}  // namespace

std::string strategy_list_help() {
  std::string s;
  for (StrategyId id : kAllStrategies) {
    if (!s.empty()) s += ", ";
    s += strategy_name(id);
  }
  return s;
}

int cmd_infer(const InferArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto strategies = parse_strategies(args.strategy);
    const PreparedInstance prepared(load_instance(args.dataset, args.x),
                                    parse_backend_or_throw(args.backend));
    InferenceOptions opt;
    opt.epsilon = args.epsilon;
    opt.delta = args.delta;
    opt.sample_average_qae_inner = args.qae_inner;
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      if (i > 0) out << '\n';
      print_report(infer(strategies[i], prepared, opt, args.seed), out);
    }
    return kExitOk;
  });
}

int cmd_benchmark(const BenchmarkArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.trials == 0) throw FormatError("--trials must be at least 1");
    ExperimentPlan plan(load_instance(args.dataset, args.x));
    plan.strategies = parse_strategies(args.strategy);
    plan.epsilon_grid = parse_real_list(args.epsilons);
    plan.trials = args.trials;
    plan.base_seed = args.seed;
    plan.backend = parse_backend_or_throw(args.backend);
    plan.delta = args.delta;
    const ExperimentResult result = run_plan(plan);
    const auto csv = emit(result, EmitFormat::kCsv, args.out);
    const auto plot = emit(result, EmitFormat::kPlotdata, args.out);
    out << "rows: " << result.rows.size() << '\n'
        << "csv: " << csv.string() << '\n'
        << "plotdata: " << plot.string() << '\n';
    for (const auto& s : result.query_slopes) {
      out << "query_slope[" << strategy_name(s.strategy) << "]: " << fmt_short(s.fit.slope)
          << " +- " << fmt_short(s.fit.stderr_slope) << '\n';
    }
    return kExitOk;
  });
}

int cmd_recommend(const RecommendArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.criterion != "queries" && args.criterion != "gates" && args.criterion != "both") {
      throw FormatError("--criterion must be queries, gates or both");
    }
    GateCostModel model;
    std::vector<double> alpha;
    if (args.dataset) {
      const DatasetFile d = load_dataset(*args.dataset);
      model = GateCostModel::from(d.feature_map, d.alpha.size());
      alpha = d.alpha;
    } else {
      if (!args.G || !args.n || !args.alpha) {
        throw FormatError("recommend needs --dataset or all of --G, --n and --alpha");
      }
      alpha = parse_real_list(*args.alpha);
      if (args.N && *args.N != alpha.size()) {
        throw FormatError("--N disagrees with the length of --alpha");
      }
      model = GateCostModel{*args.G, alpha.size(), *args.n};
    }
    if (!(args.epsilon > 0.0)) throw FormatError("--epsilon must be positive");
    const CoefDecomposition decomp = decompose(CoefficientVector(alpha));

    out << "G: " << model.G << "  N: " << model.N << "  n: " << model.n
        << "  epsilon: " << fmt_short(args.epsilon) << '\n';
    for (Criterion c : {Criterion::kQueries, Criterion::kGates}) {
      if (args.criterion == "queries" && c != Criterion::kQueries) continue;
      if (args.criterion == "gates" && c != Criterion::kGates) continue;
      const Recommendation rec = recommend(model, decomp, args.epsilon, c);
      const char* mark = c == Criterion::kQueries ? "★" : "⋄";
      out << '\n'
          << "ranking by " << (c == Criterion::kQueries ? "queries" : "gates")
          << (rec.asymptotic_regime ? "" : " (outside the asymptotic regime)") << '\n';
      char line[160];
      std::snprintf(line, sizeof line, "  %-4s %-28s %22s %22s\n", "rank", "strategy", "queries",
                    "gates");
      out << line;
      for (std::size_t i = 0; i < rec.ranking.size(); ++i) {
        const auto& r = rec.ranking[i];
        std::snprintf(line, sizeof line, "  %-4zu %-28s %22.10g %22.10g", i + 1,
                      std::string(strategy_name(r.strategy)).c_str(), r.queries, r.gates);
        out << line << (i == 0 ? std::string(" ") + mark : std::string()) << '\n';
      }
    }
    return kExitOk;
  });
}

int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<int> ids;
    if (args.criteria) {
      for (double v : parse_real_list(*args.criteria)) {
        const int id = static_cast<int>(v);
        if (id != v || id < 1 || id > kNumCriteria) {
          throw FormatError("criterion ids range over 1.." + std::to_string(kNumCriteria));
        }
        ids.push_back(id);
      }
    } else {
      ids = criteria_for_level(args.level);
    }
    ValidationConfig cfg;
    cfg.data_dir = args.data_dir.empty() ? std::filesystem::path(QKINFER_DEFAULT_DATA_DIR)
                                         : args.data_dir;
    cfg.scratch_dir = args.scratch_dir.empty()
                          ? std::filesystem::temp_directory_path() / "qkinfer_validate"
                          : args.scratch_dir;
    cfg.seed = args.seed;
    bool all = true;
    for (int id : ids) {
      const CriterionResult r = run_criterion(id, cfg);
      out << format_result(r) << std::endl;
      all = all && r.passed;
    }
    out << (all ? "all criteria passed" : "some criteria failed") << '\n';
    return all ? kExitOk : kExitRuntime;
  });
}

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto family = parse_family(args.family);
    if (!family) throw FormatError("unknown feature map family '" + args.family + "'");
    GeneratorOptions o;
    o.family = *family;
    o.num_qubits = args.num_qubits;
    o.num_layers = args.num_layers;
    o.num_terms = args.num_terms;
    o.num_test_inputs = args.num_test_inputs;
    o.seed = args.seed;
    o.heavy_tailed = !args.uniform;
    o.name = args.name;
    const DatasetFile d = generate_dataset(o);
    if (args.out.empty()) {
      out << dump_dataset(d);
    } else {
      save_dataset(d, args.out);
      out << "wrote " << args.out.string() << '\n';
    }
    return kExitOk;
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"qkinfer: quantum kernel inference simulator and benchmark suite"};
  app.require_subcommand(1);
  const std::string strategy_help =
      "strategy name or 'all'; one of: " + strategy_list_help();

  InferArgs infer_args;
  auto* infer_cmd = app.add_subcommand("infer", "estimate f(x) with one strategy");
  infer_cmd->add_option("--dataset", infer_args.dataset, "dataset file")->required();
  infer_cmd->add_option("--x", infer_args.x, "input point as comma-separated reals");
  infer_cmd->add_option("--strategy", infer_args.strategy, strategy_help);
  infer_cmd->add_option("--epsilon", infer_args.epsilon, "target precision");
  infer_cmd->add_option("--delta", infer_args.delta, "failure probability (default 1/3)");
  infer_cmd->add_option("--seed", infer_args.seed, "random seed");
  infer_cmd->add_option("--backend", infer_args.backend, "analytic2d|fullstate");
  infer_cmd->add_flag("--qae-inner", infer_args.qae_inner,
                      "sample-average: amplitude estimation for inner kernels");

  BenchmarkArgs bench_args;
  auto* bench_cmd = app.add_subcommand("benchmark", "run a seeded sweep and write CSV files");
  bench_cmd->add_option("--dataset", bench_args.dataset, "dataset file")->required();
  bench_cmd->add_option("--x", bench_args.x, "input point as comma-separated reals");
  bench_cmd->add_option("--strategy", bench_args.strategy, strategy_help);
  bench_cmd->add_option("--epsilon,--epsilons", bench_args.epsilons, "comma-separated precision grid");
  bench_cmd->add_option("--delta", bench_args.delta, "failure probability (default 1/3)");
  bench_cmd->add_option("--trials", bench_args.trials, "trials per strategy and epsilon");
  bench_cmd->add_option("--seed", bench_args.seed, "base seed");
  bench_cmd->add_option("--out", bench_args.out, "output directory");
  bench_cmd->add_option("--backend", bench_args.backend, "analytic2d|fullstate");

  RecommendArgs rec_args;
  auto* rec_cmd = app.add_subcommand("recommend", "rank strategies by query or gate cost");
  rec_cmd->add_option("--dataset", rec_args.dataset, "dataset file");
  rec_cmd->add_option("--G", rec_args.G, "gates per feature-map query");
  rec_cmd->add_option("--N", rec_args.N, "number of coefficients");
  rec_cmd->add_option("--n", rec_args.n, "data qubits");
  rec_cmd->add_option("--alpha", rec_args.alpha, "coefficients as comma-separated reals");
  rec_cmd->add_option("--epsilon", rec_args.epsilon, "target precision");
  rec_cmd->add_option("--criterion", rec_args.criterion, "queries|gates|both");

  ValidateArgs val_args;
  auto* val_cmd = app.add_subcommand("validate", "run the acceptance criteria");
  val_cmd->add_option("level", val_args.level, "fast|full");
  val_cmd->add_option("--criterion", val_args.criteria, "comma-separated criterion ids");
  val_cmd->add_option("--data-dir", val_args.data_dir, "fixture directory");
  val_cmd->add_option("--out", val_args.scratch_dir, "scratch directory");
  val_cmd->add_option("--seed", val_args.seed, "base seed");

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "write a random dataset fixture");
  gen_cmd->add_option("--family", gen_args.family, "angle_ry_cz|angle_rzrx_ring|identity");
  gen_cmd->add_option("--n", gen_args.num_qubits, "data qubits");
  gen_cmd->add_option("--layers", gen_args.num_layers, "feature-map layers");
  gen_cmd->add_option("--N", gen_args.num_terms, "training points");
  gen_cmd->add_option("--tests", gen_args.num_test_inputs, "test inputs");
  gen_cmd->add_option("--seed", gen_args.seed, "generator seed");
  gen_cmd->add_flag("--uniform", gen_args.uniform, "uniform instead of heavy-tailed weights");
  gen_cmd->add_option("--name", gen_args.name, "dataset name");
  gen_cmd->add_option("--out", gen_args.out, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (infer_cmd->parsed()) return cmd_infer(infer_args, std::cout, std::cerr);
  if (bench_cmd->parsed()) return cmd_benchmark(bench_args, std::cout, std::cerr);
  if (rec_cmd->parsed()) return cmd_recommend(rec_args, std::cout, std::cerr);
  if (val_cmd->parsed()) return cmd_validate(val_args, std::cout, std::cerr);
  if (gen_cmd->parsed()) return cmd_generate(gen_args, std::cout, std::cerr);
  return kExitUsage;
}

}  // namespace qkinfer::cli

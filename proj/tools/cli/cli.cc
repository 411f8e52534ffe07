// Copyright 2026 The budgetlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "budgetlab/budget/planner.h"
#include "budgetlab/budget/schedule.h"
#include "budgetlab/error.h"
#include "budgetlab/kernel/checks.h"
#include "budgetlab/kernel/extrapolation.h"
#include "budgetlab/report/csv.h"
#include "budgetlab/report/eval.h"
#include "budgetlab/report/plot.h"
#include "budgetlab/sampling/multilingual.h"
#include "budgetlab/scaling/power_law.h"
#include "budgetlab/shape/search.h"

namespace budgetlab::cli {
namespace {

// Formats a non-negative integer with comma thousands separators.
std::string group_thousands(std::int64_t value) {
  std::string digits = std::to_string(value < 0 ? -value : value);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return value < 0 ? "-" + out : out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto t = report::trim(item);
    if (!t.empty()) items.emplace_back(t);
  }
  return items;
}

// Primary data goes to the --output file when one is given, otherwise to
// stdout. Summaries follow the opposite stream so they never mix with CSV.
struct Sinks {
  std::ostream& out;
  std::ostream& err;
  std::string output;

  void data(const std::string& text) const {
    if (output.empty()) {
      out << text;
    } else {
      report::write_text_file(output, text);
    }
  }
  std::ostream& summary() const { return output.empty() ? err : out; }
};

struct PlanArgs {
  std::int64_t nodes = 0;
  std::int64_t gpus = 0;
  double weeks = 0.0;
  std::int64_t spare = 0;
  double tflops = 0.0;
  double margin = 1.0;
  double granularity = 500.0;
  std::string format = "text";
  std::string schedule;
  std::string output;
};

int run_plan(const PlanArgs& a, const Sinks& io) {
  budget::ClusterGrant grant;
  grant.nodes = a.nodes;
  grant.gpus_per_node = a.gpus;
  grant.duration_hours = a.weeks * budget::kHoursPerWeek;
  grant.spare_nodes = a.spare;
  grant.flops_per_gpu = a.tflops * 1e12;
  budget::PlanOptions options;
  options.keep_fraction = a.margin;
  options.granularity = a.granularity;
  const budget::BudgetReport r = budget::plan_budget(grant, options);

  std::string text;
  if (a.format == "csv") {
    text = "quantity,value\n";
    auto row = [&](std::string_view name, double v) {
      text += fmt::format("{},{}\n", name, report::format_exact(v));
    };
    row("gpu_hours", r.gpu_hours.value);
    row("raw_pf_days", r.raw_budget.value);
    row("budget_pf_days", r.budget.value);
    row("optimal_params", r.optimum.n_params);
    row("optimal_tokens", r.optimum.n_tokens);
    row("params_at_min_tokens", r.params_at_min_tokens);
    row("params_at_max_tokens", r.params_at_max_tokens);
  } else {
    text += fmt::format("cluster: {} nodes x {} GPUs, {} spare, {:g} weeks at {:g} TFLOPS/GPU\n",
                        a.nodes, a.gpus, a.spare, a.weeks, a.tflops);
    text += fmt::format("GPU-hours: {} h\n",
                        group_thousands(std::llround(r.gpu_hours.value)));
    text += fmt::format("compute: {} PF-days ({:.1f})\n",
                        group_thousands(std::llround(r.raw_budget.value)), r.raw_budget.value);
    text += fmt::format("planning budget: {} PF-days (keep {:g}, multiples of {:g})\n",
                        group_thousands(std::llround(r.budget.value)), a.margin,
                        a.granularity);
    text += fmt::format("optimal allocation: N = {:.1f}B parameters, D = {:.1f}B tokens\n",
                        r.optimum.n_params / 1e9, r.optimum.n_tokens / 1e9);
    text += fmt::format("parameters at {:g}B tokens: {:.1f}B; at {:g}B tokens: {:.1f}B\n",
                        options.min_tokens / 1e9, r.params_at_min_tokens / 1e9,
                        options.max_tokens / 1e9, r.params_at_max_tokens / 1e9);
  }
  if (!a.schedule.empty()) {
    const budget::ScheduleConfig cfg = budget::load_schedule_config(a.schedule);
    io.summary() << "# resolved schedule\n" << budget::to_config_text(cfg);
  }
  io.data(text);
  return kExitOk;
}

struct FitArgs {
  std::string input;
  std::string proportions;
  bool all_points = false;
  double threshold = 1.0;
  std::string output;
  std::string frontier_output;
};

int run_fit(const FitArgs& a, const Sinks& io) {
  const auto points = scaling::load_scaling_csv(a.input);
  std::map<std::string, double> proportions;
  if (!a.proportions.empty()) {
    const auto table = report::CsvTable::Load(a.proportions);
    table.require_columns({"language", "proportion"});
    for (const auto& row : table.rows()) {
      proportions[table.at(row, "language")] =
          report::parse_double(table.at(row, "proportion"), row.line);
    }
  }
  scaling::FitOptions options;
  options.frontier_only = !a.all_points;
  const auto fits = scaling::fit_per_language(points, proportions, options);
  io.data(scaling::language_fits_csv(fits.rows));

  if (!a.frontier_output.empty()) {
    std::map<std::string, std::vector<scaling::ScalingPoint>> by_language;
    for (const auto& p : points) by_language[p.language].push_back(p);
    std::vector<report::PlotPoint> plot;
    for (const auto& [language, pts] : by_language) {
      for (const auto& f : scaling::pareto_frontier(pts)) {
        plot.push_back({language, f.compute, f.loss});
      }
    }
    report::emit_plot_csv(plot, a.frontier_output);
  }

  std::ostream& s = io.summary();
  s << fmt::format("fitted {} language(s)\n", fits.rows.size());
  if (!proportions.empty()) {
    try {
      const auto d = scaling::exponent_dispersion(fits.rows, a.threshold);
      s << fmt::format("alpha_c over {} rows with proportion >= {:g}%: mean {:.4f}, stddev {:.5f}\n",
                       d.n_rows, a.threshold, d.mean, d.stddev);
    } catch (const EmptySelectionError& e) {
      s << "dispersion: " << e.what() << '\n';
    }
  }
  for (const auto& f : fits.failures) {
    io.err << fmt::format("error: fit failed for {}: {}\n", f.language, f.message);
  }
  return fits.failures.empty() ? kExitOk : kExitFailure;
}

struct SearchArgs {
  double min_params = 160e9;
  double max_params = 200e9;
  std::int64_t min_layers = 70;
  std::int64_t max_layers = 80;
  std::int64_t alignment = 128;
  std::int64_t vocab = kDefaultVocab;
  std::string activation = "gelu";
  std::int64_t dp = 8;
  std::int64_t tp = 4;
  std::int64_t pp = 12;
  std::int64_t mbs = 2;
  double overhead_gb = 9.0;
  double capacity_gb = 80.0;
  std::string benchmark;
  std::string output;
};

int run_search(const SearchArgs& a, const Sinks& io) {
  shape::MemoryModel memory;
  memory.overhead_gb = a.overhead_gb;
  memory.capacity_gb = a.capacity_gb;

  if (!a.benchmark.empty()) {
    const auto rows = shape::load_benchmark_csv(a.benchmark, memory);
    io.data(shape::candidates_csv(rows));
    std::ostream& s = io.summary();
    const auto consistency = shape::consistency_check(rows);
    s << fmt::format("consistency: {} rows, {} groups, {} violation(s)\n",
                     consistency.rows_checked, consistency.groups_checked,
                     consistency.violations.size());
    for (const auto& v : consistency.violations) {
      s << fmt::format("  {}: {}\n", v.label, v.message);
    }
    try {
      const auto chosen = shape::select_final(rows);
      s << fmt::format("selected {}: {} layers, hidden {}, {} heads of {}, {:.1f} TFLOPS\n",
                       chosen.label, chosen.shape.n_layer, chosen.shape.d_model,
                       chosen.shape.n_heads, chosen.shape.head_dim, chosen.tflops.value_or(0.0));
    } catch (const NoCandidateError& e) {
      s << "selection: " << e.what() << '\n';
    }
    return consistency.passed() ? kExitOk : kExitFailure;
  }

  shape::SearchConstraints c;
  c.min_params = a.min_params;
  c.max_params = a.max_params;
  c.min_layers = a.min_layers;
  c.max_layers = a.max_layers;
  c.hidden_alignment = a.alignment;
  c.vocab = a.vocab;
  c.activation = parse_activation(a.activation);
  shape::ParallelismPlan plan{a.dp, a.tp, a.pp, a.mbs};
  plan.validate();

  std::vector<shape::CandidateRow> rows;
  for (const ModelShape& m : shape::enumerate_candidates(c)) {
    shape::CandidateRow row;
    row.shape = m;
    row.plan = plan;
    row.memory = shape::memory_per_gpu(m, plan, memory);
    rows.push_back(std::move(row));
  }
  io.data(shape::candidates_csv(rows));
  const auto fitting = std::count_if(rows.begin(), rows.end(),
                                     [](const shape::CandidateRow& r) { return !r.memory.oom; });
  io.summary() << fmt::format("{} candidate(s), {} within {:g} GB per GPU\n", rows.size(),
                              fitting, a.capacity_gb);
  return kExitOk;
}

struct SampleArgs {
  std::string input;
  double alpha = sampling::kDefaultAlpha;
  std::int64_t total_tokens = 0;
  std::string output;
};

int run_sample(const SampleArgs& a, const Sinks& io) {
  const auto weights = sampling::load_weights_csv(a.input);
  const auto shares = sampling::sampling_probs(weights, a.alpha);
  const auto tokens = sampling::allocate_tokens(a.total_tokens, shares);
  io.data(sampling::sample_csv(shares, tokens));
  return kExitOk;
}

struct KernelArgs {
  bool check = false;
  bool extrapolate = false;
  std::uint64_t seed = 1;
  std::string positional = "alibi,learned";
  std::string activation = "gelu";
  bool embed_norm = false;
  std::int64_t train_len = 64;
  std::string eval_lens = "64,128";
  std::int64_t steps = kernel::ExtrapolationOptions{}.steps;
  std::int64_t batch = kernel::ExtrapolationOptions{}.batch;
  double lr = kernel::ExtrapolationOptions{}.learning_rate;
  std::string output;
  std::string plot_output;
};

int run_kernel(const KernelArgs& a, const Sinks& io) {
  int code = kExitOk;
  if (a.check) {
    const auto report = kernel::run_kernel_checks(a.seed);
    io.out << report.to_text();
    if (!report.passed()) code = kExitFailure;
  }
  if (a.extrapolate) {
    kernel::ExtrapolationOptions options;
    options.train_len = a.train_len;
    options.eval_lens.clear();
    for (const auto& len : split_list(a.eval_lens)) {
      options.eval_lens.push_back(report::parse_int(len, 0));
    }
    options.steps = a.steps;
    options.batch = a.batch;
    options.learning_rate = a.lr;
    options.seed = a.seed;

    std::vector<kernel::ExtrapolationRow> rows;
    for (const auto& name : split_list(a.positional)) {
      kernel::KernelConfig config;
      config.positional = kernel::parse_positional(name);
      config.activation = parse_activation(a.activation);
      config.embed_norm = a.embed_norm;
      config.n_ctx_train = a.train_len;
      const auto result = kernel::extrapolation_curve(config, options);
      io.summary() << fmt::format("{}: final train loss {:.4f} in {:.1f} s\n", name,
                                  result.final_train_loss, result.seconds);
      for (const auto& row : result.rows) {
        if (row.status == kernel::kStatusDiverged) code = kExitFailure;
        rows.push_back(row);
      }
    }
    io.data(kernel::extrapolation_csv(rows));
    if (!a.plot_output.empty()) {
      std::vector<report::PlotPoint> plot;
      for (const auto& row : rows) {
        if (row.loss) {
          plot.push_back({std::string(kernel::to_string(row.positional)),
                          static_cast<double>(row.eval_len), *row.loss});
        }
      }
      report::emit_plot_csv(plot, a.plot_output);
    }
  }
  return code;
}

struct ReportArgs {
  std::string input;
  std::vector<std::string> models;
  std::string metrics = "acc";
  std::string compare;
  std::string format = "text";
  std::string output;
};

int run_report(const ReportArgs& a, const Sinks& io) {
  std::string text;
  if (!a.input.empty()) {
    const auto records = report::load_eval_csv(a.input);
    std::set<report::Metric> metrics;
    for (const auto& m : split_list(a.metrics)) metrics.insert(report::parse_metric(m));
    const auto models = a.models.empty() ? report::models_in(records) : a.models;
    if (a.format == "csv") text += "model,average_acc,n_tasks\n";
    for (const auto& model : models) {
      const auto row = report::average_accuracy(records, model, metrics);
      if (a.format == "csv") {
        text += fmt::format("{},{},{}\n", report::csv_escape(row.model),
                            report::format_exact(row.average_acc), row.n_tasks);
      } else {
        text += fmt::format("{} {} ({} tasks)\n", row.model,
                            report::format_percent(row.average_acc), row.n_tasks);
      }
    }
  }
  if (!a.compare.empty()) {
    const auto table = report::comparison_table(report::load_comparison_csv(a.compare));
    if (!text.empty()) text += '\n';
    text += a.format == "csv" ? table.to_csv() : table.to_text();
  }
  io.data(text);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compute-budget planning, scaling-law fits, shape search, sampling, "
               "transformer kernel checks and eval reporting."};
  app.name(args.empty() ? "budgetlab" : args.front());
  app.require_subcommand(1);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Turn a cluster grant into a compute budget and "
                                              "a parameter/token allocation");
  plan_cmd->add_option("--nodes", plan.nodes, "Nodes in the grant")->required();
  plan_cmd->add_option("--gpus", plan.gpus, "GPUs per node")->required();
  plan_cmd->add_option("--weeks", plan.weeks, "Grant duration in weeks")->required();
  plan_cmd->add_option("--spare", plan.spare, "Nodes held back as spares")->capture_default_str();
  plan_cmd->add_option("--tflops", plan.tflops, "Assumed sustained TFLOPS per GPU")->required();
  plan_cmd->add_option("--margin", plan.margin, "Fraction of the budget kept for the main run")
      ->capture_default_str();
  plan_cmd->add_option("--granularity", plan.granularity,
                       "Round the kept budget down to a multiple of this many PF-days")
      ->capture_default_str();
  plan_cmd->add_option("--format", plan.format, "Output format")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  plan_cmd->add_option("--schedule", plan.schedule,
                       "key=value schedule file to validate and echo");
  plan_cmd->add_option("--output", plan.output, "Write the plan here instead of stdout");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit L = C_m * C^-alpha per language on the "
                                            "compute/loss frontier");
  fit_cmd->add_option("--input", fit.input, "CSV with language,compute_pf_days,loss")
      ->required();
  fit_cmd->add_option("--proportions", fit.proportions,
                      "CSV with language,proportion columns (percent of corpus)");
  fit_cmd->add_flag("--all-points", fit.all_points, "Fit every run instead of the frontier");
  fit_cmd->add_option("--dispersion-threshold", fit.threshold,
                      "Minimum proportion (percent) for the exponent dispersion summary")
      ->capture_default_str();
  fit_cmd->add_option("--output", fit.output, "Write the fit CSV here instead of stdout");
  fit_cmd->add_option("--frontier-output", fit.frontier_output,
                      "Write per-language frontier points as series,x,y CSV");

  SearchArgs search;
  auto* search_cmd =
      app.add_subcommand("search", "Enumerate model shapes under a parameter budget and "
                                   "estimate per-GPU memory, or audit a benchmark table");
  search_cmd->add_option("--min-params", search.min_params)->capture_default_str();
  search_cmd->add_option("--max-params", search.max_params)->capture_default_str();
  search_cmd->add_option("--min-layers", search.min_layers)->capture_default_str();
  search_cmd->add_option("--max-layers", search.max_layers)->capture_default_str();
  search_cmd->add_option("--alignment", search.alignment, "Hidden size multiple")
      ->capture_default_str();
  search_cmd->add_option("--vocab", search.vocab)->capture_default_str();
  search_cmd->add_option("--activation", search.activation)
      ->check(CLI::IsMember({"gelu", "swiglu"}))
      ->capture_default_str();
  search_cmd->add_option("--dp", search.dp)->capture_default_str();
  search_cmd->add_option("--tp", search.tp)->capture_default_str();
  search_cmd->add_option("--pp", search.pp)->capture_default_str();
  search_cmd->add_option("--mbs", search.mbs, "Micro-batch size")->capture_default_str();
  search_cmd->add_option("--overhead-gb", search.overhead_gb)->capture_default_str();
  search_cmd->add_option("--capacity-gb", search.capacity_gb)->capture_default_str();
  search_cmd->add_option("--benchmark", search.benchmark,
                         "Benchmark CSV (measured shapes) to check and select from");
  search_cmd->add_option("--output", search.output, "Write the candidate CSV here");

  SampleArgs sample;
  auto* sample_cmd =
      app.add_subcommand("sample", "Exponent-smoothed multilingual sampling probabilities");
  sample_cmd->add_option("--input", sample.input, "CSV with language,weight")->required();
  sample_cmd->add_option("--alpha", sample.alpha, "Smoothing exponent in [0, 1]")
      ->capture_default_str();
  sample_cmd->add_option("--total-tokens", sample.total_tokens, "Tokens to distribute")
      ->required();
  sample_cmd->add_option("--output", sample.output, "Write the CSV here instead of stdout");

  KernelArgs kern;
  auto* kernel_cmd =
      app.add_subcommand("kernel", "Transformer kernel invariant checks and the "
                                   "length-extrapolation experiment");
  kernel_cmd->add_flag("--check", kern.check, "Run the invariant and gradient-check suite");
  kernel_cmd->add_flag("--extrapolate", kern.extrapolate,
                       "Train tiny models and emit positional,eval_len,loss CSV");
  kernel_cmd->add_option("--seed", kern.seed)->capture_default_str();
  kernel_cmd->add_option("--positional", kern.positional,
                         "Comma list of none,learned,rotary,alibi")
      ->capture_default_str();
  kernel_cmd->add_option("--activation", kern.activation)
      ->check(CLI::IsMember({"gelu", "swiglu"}))
      ->capture_default_str();
  kernel_cmd->add_flag("--embed-norm", kern.embed_norm, "Layer norm after the embedding");
  kernel_cmd->add_option("--train-len", kern.train_len)->capture_default_str();
  kernel_cmd->add_option("--eval-lens", kern.eval_lens, "Comma list of lengths")
      ->capture_default_str();
  kernel_cmd->add_option("--steps", kern.steps)->capture_default_str();
  kernel_cmd->add_option("--batch", kern.batch)->capture_default_str();
  kernel_cmd->add_option("--lr", kern.lr)->capture_default_str();
  kernel_cmd->add_option("--output", kern.output, "Write the extrapolation CSV here");
  kernel_cmd->add_option("--plot-output", kern.plot_output,
                         "Write the extrapolation curve as series,x,y CSV");

  ReportArgs rep;
  auto* report_cmd =
      app.add_subcommand("report", "Average eval accuracy per model and comparison tables");
  report_cmd->add_option("--input", rep.input, "CSV with model,task,metric,value");
  report_cmd->add_option("--model", rep.models, "Model tag (repeatable; default all)");
  report_cmd->add_option("--metrics", rep.metrics, "Comma list of acc,acc_norm,f1")
      ->capture_default_str();
  report_cmd->add_option("--compare", rep.compare,
                         "CSV with model,params_b,dataset,tokens_b,group,avg_acc");
  report_cmd->add_option("--format", rep.format)
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  report_cmd->add_option("--output", rep.output, "Write the report here instead of stdout");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("budgetlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (plan_cmd->parsed()) return run_plan(plan, Sinks{out, err, plan.output});
    if (fit_cmd->parsed()) return run_fit(fit, Sinks{out, err, fit.output});
    if (search_cmd->parsed()) return run_search(search, Sinks{out, err, search.output});
    if (sample_cmd->parsed()) return run_sample(sample, Sinks{out, err, sample.output});
    if (kernel_cmd->parsed()) {
      if (!kern.check && !kern.extrapolate) {
        err << "error: kernel needs --check and/or --extrapolate\n\n" << kernel_cmd->help();
        return kExitUsage;
      }
      return run_kernel(kern, Sinks{out, err, kern.output});
    }
    if (report_cmd->parsed()) {
      if (rep.input.empty() && rep.compare.empty()) {
        err << "error: report needs --input and/or --compare\n\n" << report_cmd->help();
        return kExitUsage;
      }
      return run_report(rep, Sinks{out, err, rep.output});
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace budgetlab::cli

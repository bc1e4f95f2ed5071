/*
 * Copyright 2026 The cqrhpo Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "blackbox.hpp"
#include "metrics.hpp"

namespace cqr {

namespace fs = std::filesystem;
using nlohmann::json;

bool ExperimentSpec::multi_fidelity() const { return method.ends_with("+mf"); }

std::string ExperimentSpec::base_method() const {
  return multi_fidelity() ? method.substr(0, method.size() - 3) : method;
}

void ExperimentSpec::validate() const {
  if (task.empty()) throw UsageError("spec: 'task' is required");
  std::string base = base_method();
  if (base != "rs" && base != "qr" && base != "cqr") {
    throw UsageError("spec: 'method' must be rs|qr|cqr, optionally with +mf");
  }
  if (seeds.empty()) throw UsageError("spec: 'seeds' must be non-empty");
  if (workers < 1) throw UsageError("spec: 'workers' must be >= 1");
  if (max_results.empty() && !max_sim_time) {
    throw UsageError("spec: need 'max_results' or 'max_sim_time'");
  }
  if (!max_results.empty()) resolved_max_results(1);  // syntax check
  if (searcher.m < 2 || searcher.m % 2 != 0) {
    throw UsageError("spec: 'm' must be even and >= 2");
  }
  if (searcher.num_candidates < 1) {
    throw UsageError("spec: 'num_candidates' must be >= 1");
  }
  if (!(searcher.val_fraction > 0.0 && searcher.val_fraction < 1.0)) {
    throw UsageError("spec: 'val_fraction' must lie in (0, 1)");
  }
  if (eta < 2) throw UsageError("spec: 'eta' must be >= 2");
  if (grace_period < 1) throw UsageError("spec: 'grace_period' must be >= 1");
}

long ExperimentSpec::resolved_max_results(int r_max) const {
  if (max_results.empty()) return 0;
  std::string s = max_results;
  long factor = 1;
  if (s.ends_with('x')) {
    factor = r_max;
    s.pop_back();
  }
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size() || v < 1) throw std::invalid_argument("");
    return v * factor;
  } catch (const std::exception&) {
    throw UsageError("spec: 'max_results' must be a positive count, optionally "
                     "suffixed with 'x' for multiples of r_max");
  }
}

std::string ExperimentSpec::to_json() const {
  json j;
  j["version"] = 1;
  j["task"] = task;
  j["method"] = method;
  j["seeds"] = seeds;
  j["workers"] = workers;
  if (!max_results.empty()) j["max_results"] = max_results;
  if (max_sim_time) j["max_sim_time"] = *max_sim_time;
  j["searcher"] = {{"m", searcher.m},
                   {"num_candidates", searcher.num_candidates},
                   {"val_fraction", searcher.val_fraction},
                   {"n_init", searcher.n_init},
                   {"conformal_threshold", searcher.conformal_threshold}};
  j["gbm"] = {{"n_trees", searcher.gbm.n_trees},
              {"max_depth", searcher.gbm.max_depth},
              {"learning_rate", searcher.gbm.learning_rate},
              {"min_samples_leaf", searcher.gbm.min_samples_leaf}};
  j["scheduler"] = {{"eta", eta},
                    {"grace_period", grace_period},
                    {"promotion_variant", promotion_variant}};
  j["suggest_overhead"] = suggest_overhead;
  return j.dump(2);
}

ExperimentSpec ExperimentSpec::from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("spec: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    spec.task = j.at("task").get<std::string>();
    spec.method = j.at("method").get<std::string>();
    spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    spec.workers = j.value("workers", spec.workers);
    if (j.contains("max_results")) {
      if (j["max_results"].is_number()) {
        spec.max_results = std::to_string(j["max_results"].get<long>());
      } else {
        spec.max_results = j["max_results"].get<std::string>();
      }
    }
    if (j.contains("max_sim_time")) spec.max_sim_time = j["max_sim_time"].get<double>();
    if (j.contains("searcher")) {
      const auto& s = j["searcher"];
      spec.searcher.m = s.value("m", spec.searcher.m);
      spec.searcher.num_candidates =
          s.value("num_candidates", spec.searcher.num_candidates);
      spec.searcher.val_fraction = s.value("val_fraction", spec.searcher.val_fraction);
      spec.searcher.n_init = s.value("n_init", spec.searcher.n_init);
      spec.searcher.conformal_threshold =
          s.value("conformal_threshold", spec.searcher.conformal_threshold);
    }
    if (j.contains("gbm")) {
      const auto& g = j["gbm"];
      spec.searcher.gbm.n_trees = g.value("n_trees", spec.searcher.gbm.n_trees);
      spec.searcher.gbm.max_depth = g.value("max_depth", spec.searcher.gbm.max_depth);
      spec.searcher.gbm.learning_rate =
          g.value("learning_rate", spec.searcher.gbm.learning_rate);
      spec.searcher.gbm.min_samples_leaf =
          g.value("min_samples_leaf", spec.searcher.gbm.min_samples_leaf);
    }
    if (j.contains("scheduler")) {
      const auto& s = j["scheduler"];
      spec.eta = s.value("eta", spec.eta);
      spec.grace_period = s.value("grace_period", spec.grace_period);
      spec.promotion_variant = s.value("promotion_variant", spec.promotion_variant);
    }
    spec.suggest_overhead = j.value("suggest_overhead", spec.suggest_overhead);
  } catch (const json::exception& e) {
    throw UsageError(std::string("spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

namespace {

struct SeedRun {
  std::uint64_t seed;
  ExperimentLog log;
};

std::pair<double, double> log_value_range(const std::vector<SeedRun>& runs) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& run : runs) {
    for (const auto& rec : run.log.records) {
      if (rec.decision == "error") continue;
      lo = std::min(lo, rec.y);
      hi = std::max(hi, rec.y);
    }
  }
  if (!(lo < hi)) hi = lo + 1.0;  // degenerate logs still get a finite scale
  return {lo, hi};
}

void write_metrics_csv(const std::string& path,
                       const std::vector<std::string>& methods,
                       const std::string& task,
                       const std::map<std::string, std::vector<SeedRun>>& runs,
                       std::pair<double, double> range, double total_time) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("metrics: cannot write '" + path + "'");
  out << "method,task,seed,fraction,regret,rank\n";

  // regrets[method][seed index][fraction]
  std::map<std::string, std::vector<std::vector<double>>> regrets;
  for (const auto& method : methods) {
    for (const auto& run : runs.at(method)) {
      auto curve = regret_curve(run.log, range.first, range.second);
      std::vector<double> at_fraction(kNumBudgetFractions);
      for (int f = 1; f <= kNumBudgetFractions; ++f) {
        at_fraction[static_cast<std::size_t>(f - 1)] = regret_at_time_fraction(
            curve, static_cast<double>(f) / kNumBudgetFractions, total_time);
      }
      regrets[method].push_back(std::move(at_fraction));
    }
  }

  const std::size_t n_seeds = runs.at(methods[0]).size();
  for (std::size_t s = 0; s < n_seeds; ++s) {
    for (int f = 0; f < kNumBudgetFractions; ++f) {
      std::vector<double> column;
      for (const auto& method : methods) {
        column.push_back(regrets[method][s][static_cast<std::size_t>(f)]);
      }
      auto ranks = methods.size() > 1 ? fractional_ranks(column)
                                      : std::vector<double>{1.0};
      for (std::size_t m = 0; m < methods.size(); ++m) {
        out << methods[m] << ',' << task << ',' << runs.at(methods[m])[s].seed << ','
            << format_double(static_cast<double>(f + 1) / kNumBudgetFractions) << ','
            << format_double(column[m]) << ',' << format_double(ranks[m]) << '\n';
      }
    }
  }
}

}  // namespace

void run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
  spec.validate();

  {
    auto probe = make_blackbox(spec.task, spec.seeds[0]);
    if (spec.multi_fidelity() && probe->r_max() <= 1) {
      throw UsageError("spec: method '" + spec.method +
                       "' needs a task with r_max > 1");
    }
  }

  fs::create_directories(out_dir);
  std::vector<SeedRun> runs;
  std::optional<std::pair<double, double>> known_range;
  int r_max = 1;

  for (std::uint64_t seed : spec.seeds) {
    auto blackbox = make_blackbox(spec.task, seed);
    r_max = blackbox->r_max();
    known_range = blackbox->known_range();

    AshaOptions asha;
    asha.eta = spec.eta;
    asha.r_max = blackbox->r_max();
    asha.r_min = spec.multi_fidelity() ? spec.grace_period : blackbox->r_max();
    asha.promotion_variant = spec.promotion_variant;
    AshaScheduler scheduler(asha);

    auto searcher = make_searcher(spec.base_method(), spec.searcher);

    RunOptions options;
    options.workers = spec.workers;
    options.seed = seed;
    options.suggest_overhead = spec.suggest_overhead;
    if (!spec.max_results.empty()) {
      options.stop.max_results = spec.resolved_max_results(blackbox->r_max());
    }
    options.stop.max_sim_time = spec.max_sim_time;

    ExperimentLog log = run(*blackbox, scheduler, *searcher, options);

    fs::path seed_dir = fs::path(out_dir) / spec.method / std::to_string(seed);
    fs::create_directories(seed_dir);
    log.write_csv((seed_dir / "log.csv").string());

    if (log.error) {
      json err;
      err["error"] = *log.error;
      err["seed"] = seed;
      err["spec"] = json::parse(spec.to_json());
      std::ofstream(fs::path(out_dir) / "error.json") << err.dump(2) << '\n';
      throw std::runtime_error("run failed (seed " + std::to_string(seed) +
                               "): " + *log.error);
    }
    runs.push_back({seed, std::move(log)});
  }

  double total_time = 0.0;
  for (const auto& run : runs) {
    if (!run.log.records.empty()) {
      total_time = std::max(total_time, run.log.records.back().time);
    }
  }
  auto range = known_range ? *known_range : log_value_range(runs);

  std::map<std::string, std::vector<SeedRun>> by_method;
  by_method[spec.method] = std::move(runs);
  write_metrics_csv((fs::path(out_dir) / "metrics.csv").string(), {spec.method},
                    spec.task, by_method, range, total_time);

  json manifest = json::parse(spec.to_json());
  manifest["r_max"] = r_max;
  manifest["resolved_max_results"] =
      spec.max_results.empty() ? 0 : spec.resolved_max_results(r_max);
  if (known_range) {
    manifest["y_min"] = known_range->first;
    manifest["y_max"] = known_range->second;
  }
  std::ofstream(fs::path(out_dir) / "manifest.json") << manifest.dump(2) << '\n';
}

std::vector<MethodSummary> compare(const std::vector<std::string>& dirs,
                                   const std::string& out_csv) {
  if (dirs.empty()) throw UsageError("compare: no input directories");

  std::string task;
  std::set<std::string> tasks_seen;
  std::vector<std::string> methods;
  std::map<std::string, std::vector<SeedRun>> runs;
  std::optional<std::pair<double, double>> known_range;

  for (const auto& dir : dirs) {
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw UsageError("compare: no manifest.json in '" + dir + "'");
    json manifest = json::parse(in);
    std::string dir_task = manifest.at("task").get<std::string>();
    std::string method = manifest.at("method").get<std::string>();
    tasks_seen.insert(dir_task);
    task = dir_task;
    if (manifest.contains("y_min")) {
      known_range = std::make_pair(manifest["y_min"].get<double>(),
                                   manifest["y_max"].get<double>());
    }
    if (std::find(methods.begin(), methods.end(), method) != methods.end()) {
      throw UsageError("compare: method '" + method + "' appears twice");
    }
    methods.push_back(method);
    for (std::uint64_t seed : manifest.at("seeds").get<std::vector<std::uint64_t>>()) {
      fs::path log_path = fs::path(dir) / method / std::to_string(seed) / "log.csv";
      runs[method].push_back({seed, ExperimentLog::read_csv(log_path.string())});
    }
  }

  if (tasks_seen.size() > 1) {
    std::string list;
    for (const auto& t : tasks_seen) list += (list.empty() ? "" : ", ") + t;
    throw UsageError("compare: directories cover different tasks: " + list);
  }
  std::size_t n_seeds = runs[methods[0]].size();
  for (const auto& method : methods) {
    if (runs[method].size() != n_seeds) {
      throw UsageError("compare: methods have different seed counts");
    }
  }

  double total_time = 0.0;
  for (const auto& [method, seed_runs] : runs) {
    for (const auto& run : seed_runs) {
      if (!run.log.records.empty()) {
        total_time = std::max(total_time, run.log.records.back().time);
      }
    }
  }
  std::pair<double, double> range;
  if (known_range) {
    range = *known_range;
  } else {
    std::vector<SeedRun> all;
    for (const auto& [method, seed_runs] : runs) {
      for (const auto& run : seed_runs) all.push_back({run.seed, run.log});
    }
    range = log_value_range(all);
  }

  write_metrics_csv(out_csv, methods, task, runs, range, total_time);

  std::vector<MethodSummary> summary;
  for (const auto& method : methods) {
    double regret_sum = 0.0;
    std::vector<double> final_regrets;
    for (const auto& run : runs[method]) {
      auto curve = regret_curve(run.log, range.first, range.second);
      double r = regret_at_time_fraction(curve, 1.0, total_time);
      final_regrets.push_back(r);
      regret_sum += r;
    }
    summary.push_back({method, regret_sum / static_cast<double>(n_seeds), 0.0});
  }
  // Final-fraction ranks, averaged over seeds.
  for (std::size_t s = 0; s < n_seeds; ++s) {
    std::vector<double> column;
    for (const auto& method : methods) {
      auto curve = regret_curve(runs[method][s].log, range.first, range.second);
      column.push_back(regret_at_time_fraction(curve, 1.0, total_time));
    }
    auto ranks =
        methods.size() > 1 ? fractional_ranks(column) : std::vector<double>{1.0};
    for (std::size_t m = 0; m < methods.size(); ++m) {
      summary[m].mean_final_rank += ranks[m] / static_cast<double>(n_seeds);
    }
  }
  return summary;
}

}  // namespace cqr

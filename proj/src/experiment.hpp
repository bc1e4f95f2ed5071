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

#ifndef CQRHPO_EXPERIMENT_HPP
#define CQRHPO_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "scheduler.hpp"
#include "searcher.hpp"
#include "simulator.hpp"

namespace cqr {

// A usage-level error: bad flags, bad spec fields, incompatible inputs.
// Distinguished from runtime failure for the CLI exit code.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentSpec {
  std::string task;    // "synthetic" | "synthetic-mf" | tabular file path
  std::string method;  // rs | qr | cqr, optionally with "+mf"
  std::vector<std::uint64_t> seeds;
  int workers = 4;
  // "200x" means 200 * r_max; plain numbers are absolute counts.
  std::string max_results;
  std::optional<double> max_sim_time;
  SearcherOptions searcher;
  int eta = 3;
  int grace_period = 1;
  bool promotion_variant = false;
  double suggest_overhead = 0.0;

  bool multi_fidelity() const;
  std::string base_method() const;  // method without the "+mf" suffix

  // Throws UsageError naming the offending field.
  void validate() const;
  long resolved_max_results(int r_max) const;

  std::string to_json() const;
  static ExperimentSpec from_json(const std::string& json_text);
};

// Runs one method over all seeds, writing <out>/<method>/<seed>/log.csv,
// <out>/metrics.csv and <out>/manifest.json. The manifest records every
// resolved default; re-running from it reproduces the logs byte for byte.
void run_experiment(const ExperimentSpec& spec, const std::string& out_dir);

struct MethodSummary {
  std::string method;
  double mean_final_regret = 0.0;
  double mean_final_rank = 0.0;
};

// Joins several run_experiment output directories over a shared task and
// writes per-(method, seed, fraction) regret and rank rows to out_csv.
std::vector<MethodSummary> compare(const std::vector<std::string>& dirs,
                                   const std::string& out_csv);

inline constexpr int kNumBudgetFractions = 50;

}  // namespace cqr

#endif  // CQRHPO_EXPERIMENT_HPP

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

// Experiment runner on top of the cqrhpo C API.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqrhpo.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int status_to_exit(cqrhpo_status status) {
  switch (status) {
    case CQRHPO_OK:
      return 0;
    case CQRHPO_ERROR_INVALID_ARGUMENT:
    case CQRHPO_ERROR_PARSE:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

int report(cqrhpo_status status) {
  int code = status_to_exit(status);
  if (code != 0) std::cerr << "error: " << cqrhpo_last_error() << "\n";
  return code;
}

struct RunFlags {
  std::string task;
  std::string method;
  std::vector<std::uint64_t> seeds;
  int workers = 4;
  std::string max_results;
  double max_sim_time = 0.0;
  int m = 4;
  int num_candidates = 2000;
  double val_fraction = 0.1;
  int conformal_threshold = 32;
  int eta = 3;
  int grace_period = 1;
  bool promotion_variant = false;
  std::string manifest_path;
  std::string out;
};

std::string build_spec_json(const RunFlags& flags) {
  nlohmann::json spec;
  if (!flags.manifest_path.empty()) {
    std::ifstream in(flags.manifest_path);
    if (!in) throw CLI::ValidationError("--manifest", "cannot open file");
    in >> spec;
  } else {
    spec["task"] = flags.task;
    spec["method"] = flags.method;
    spec["seeds"] = flags.seeds;
    spec["workers"] = flags.workers;
    if (!flags.max_results.empty()) spec["max_results"] = flags.max_results;
    if (flags.max_sim_time > 0.0) spec["max_sim_time"] = flags.max_sim_time;
    spec["searcher"] = {{"m", flags.m},
                        {"num_candidates", flags.num_candidates},
                        {"val_fraction", flags.val_fraction},
                        {"conformal_threshold", flags.conformal_threshold}};
    spec["scheduler"] = {{"eta", flags.eta},
                         {"grace_period", flags.grace_period},
                         {"promotion_variant", flags.promotion_variant}};
  }
  return spec.dump();
}

// Mean regret and rank per method at the final budget fraction, straight
// from the CSV the compare call produced.
void print_compare_summary(const std::string& csv_path) {
  std::ifstream in(csv_path);
  std::string line;
  std::getline(in, line);  // header
  std::map<std::string, std::pair<double, double>> sums;  // method -> (regret, rank)
  std::map<std::string, int> counts;
  double last_fraction = -1.0;
  std::vector<std::array<std::string, 3>> rows;  // method, regret, rank at fraction
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string method, task, seed, fraction, regret, rank;
    std::getline(ss, method, ',');
    std::getline(ss, task, ',');
    std::getline(ss, seed, ',');
    std::getline(ss, fraction, ',');
    std::getline(ss, regret, ',');
    std::getline(ss, rank, ',');
    double f = std::stod(fraction);
    if (f > last_fraction) last_fraction = f;
    if (f == 1.0) {
      sums[method].first += std::stod(regret);
      sums[method].second += std::stod(rank);
      counts[method] += 1;
    }
  }
  std::cout << "final-fraction summary (mean over seeds):\n";
  for (const auto& [method, sum] : sums) {
    int n = counts[method];
    std::cout << "  " << method << ": regret=" << sum.first / n
              << " rank=" << sum.second / n << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cqrhpo: conformal quantile regression hyperparameter tuning"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run_cmd = app.add_subcommand("run", "run a simulated experiment");
  run_cmd->add_option("--task", flags.task,
                      "synthetic | synthetic-mf | tabular blackbox file");
  run_cmd->add_option("--method", flags.method, "rs|qr|cqr, optionally +mf");
  run_cmd->add_option("--seeds", flags.seeds, "random seeds, one run each");
  run_cmd->add_option("--workers", flags.workers, "parallel simulated workers");
  run_cmd->add_option("--max-results", flags.max_results,
                      "result budget; suffix 'x' multiplies by r_max");
  run_cmd->add_option("--max-sim-time", flags.max_sim_time,
                      "simulated seconds budget");
  run_cmd->add_option("--m", flags.m, "number of quantile levels (even)");
  run_cmd->add_option("--num-candidates", flags.num_candidates,
                      "Thompson-sampling candidate count");
  run_cmd->add_option("--val-fraction", flags.val_fraction,
                      "validation split fraction");
  run_cmd->add_option("--conformal-threshold", flags.conformal_threshold,
                      "observations needed before conformalizing");
  run_cmd->add_option("--eta", flags.eta, "halving reduction factor");
  run_cmd->add_option("--grace-period", flags.grace_period, "minimum fidelity");
  run_cmd->add_flag("--promotion-variant", flags.promotion_variant,
                    "use the promotion variant instead of stopping");
  run_cmd->add_option("--manifest", flags.manifest_path,
                      "re-run an experiment from its manifest.json");
  run_cmd->add_option("--out", flags.out, "output directory")->required();

  std::vector<std::string> compare_dirs;
  std::string compare_out;
  auto* compare_cmd =
      app.add_subcommand("compare", "aggregate regret/rank across runs");
  compare_cmd->add_option("dirs", compare_dirs, "experiment output directories")
      ->required();
  compare_cmd->add_option("--out", compare_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      std::string spec = build_spec_json(flags);
      int code = report(cqrhpo_run_experiment(spec.c_str(), flags.out.c_str()));
      if (code == 0) std::cout << "wrote " << flags.out << "\n";
      return code;
    }
    std::vector<const char*> dirs;
    for (const auto& d : compare_dirs) dirs.push_back(d.c_str());
    int code =
        report(cqrhpo_compare(dirs.data(), dirs.size(), compare_out.c_str()));
    if (code == 0) print_compare_summary(compare_out);
    return code;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

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

#ifndef CQRHPO_SIMULATOR_HPP
#define CQRHPO_SIMULATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "blackbox.hpp"
#include "scheduler.hpp"
#include "searcher.hpp"

namespace cqr {

struct LogRecord {
  double time = 0.0;  // simulated seconds
  int trial_id = -1;
  int fidelity = 0;
  double y = 0.0;
  std::string decision;  // continue | stop | completed | error
  std::vector<std::string> config;  // canonical per-dimension strings
};

struct ExperimentLog {
  std::vector<std::string> dim_names;
  std::vector<LogRecord> records;
  std::optional<std::string> error;

  long result_count() const;
  void write_csv(const std::string& path) const;
  static ExperimentLog read_csv(const std::string& path);
};

struct StopRule {
  std::optional<long> max_results;
  std::optional<double> max_sim_time;
};

struct RunOptions {
  int workers = 4;
  StopRule stop;
  std::uint64_t seed = 0;
  double suggest_overhead = 0.0;  // simulated seconds charged per suggestion
};

// Discrete-event loop: all workers start at t = 0; each completion records
// the result, lets the scheduler decide, and refills freed workers. The log
// is deterministic given the seed. Event ties break by (time, worker id,
// trial id).
ExperimentLog run(const Blackbox& blackbox, AshaScheduler& scheduler,
                  Searcher& searcher, const RunOptions& options);

}  // namespace cqr

#endif  // CQRHPO_SIMULATOR_HPP

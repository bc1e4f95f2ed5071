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

#ifndef CQRHPO_SCHEDULER_HPP
#define CQRHPO_SCHEDULER_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "config_space.hpp"
#include "searcher.hpp"

namespace cqr {

// Geometric rungs {eta^0 * r_min, eta^1 * r_min, ...} capped at r_max;
// r_max is appended when it is not on the grid.
std::vector<int> rung_ladder(int r_min, int r_max, int eta);

enum class TrialStatus { kRunning, kStopped, kCompleted };

struct Trial {
  int id = -1;
  Config config;
  std::vector<std::pair<int, double>> history;  // (fidelity, y), ascending r
  TrialStatus status = TrialStatus::kRunning;
};

// Per-rung results; entries are immutable once recorded and each trial
// appears at most once per rung.
class RungTable {
 public:
  void record(int rung, int trial_id, double y);
  const std::vector<std::pair<int, double>>& at(int rung) const;  // (id, y)
  bool has(int rung) const { return table_.contains(rung); }

 private:
  std::map<int, std::vector<std::pair<int, double>>> table_;
  static const std::vector<std::pair<int, double>> kEmpty;
};

enum class Decision { kContinue, kStop, kCompleted };

// Stopping rule at a rung: continue iff y is among the top ceil(k / eta) of
// the k values recorded there (lower is better, ties to the earlier trial
// id); the terminal fidelity always completes. The result must already be
// recorded in the table.
Decision asha_decide(int trial_id, int rung, double y, const RungTable& table,
                     const std::vector<int>& rungs, int eta);

// Last-fidelity transformation: one row per trial with history, using the
// value at the trial's highest observed fidelity.
Dataset searcher_dataset(const std::vector<Trial>& trials);

struct AshaOptions {
  int r_min = 1;  // grace period
  int r_max = 1;
  int eta = 3;
  bool promotion_variant = false;  // default is the stopping variant
};

struct Action {
  enum Kind { kStartNew, kResume } kind = kStartNew;
  int trial_id = -1;   // kResume only
  int target_rung = 0; // index into the ladder
};

// Asynchronous successive halving over a single bracket. The scheduler is a
// single logical decision-maker; callers serialize on_result/next_action.
class AshaScheduler {
 public:
  explicit AshaScheduler(AshaOptions opts);

  const std::vector<int>& rungs() const { return rungs_; }
  const AshaOptions& options() const { return opts_; }
  const RungTable& table() const { return table_; }

  // Records y for the trial at rung level r and decides its fate.
  // Stopping variant: top-1/eta membership at the rung. Promotion variant:
  // every non-terminal result pauses the trial until promoted.
  Decision on_result(Trial& trial, int r, double y);

  // Fills an idle worker: promotion variant scans rungs top-down for a
  // promotable trial first; otherwise a fresh suggestion at the bottom rung.
  Action next_action(const std::vector<Trial>& trials);

  int rung_index(int r) const;  // throws if r is not a rung level

 private:
  AshaOptions opts_;
  std::vector<int> rungs_;
  RungTable table_;
  std::set<std::pair<int, int>> promoted_;  // (rung, trial id) already promoted
};

}  // namespace cqr

#endif  // CQRHPO_SCHEDULER_HPP

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

#include "scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace cqr {

std::vector<int> rung_ladder(int r_min, int r_max, int eta) {
  if (r_min < 1 || r_max < r_min || eta < 2) {
    throw std::invalid_argument("rung_ladder: need r_min >= 1, r_max >= r_min, eta >= 2");
  }
  std::vector<int> rungs;
  long long r = r_min;
  while (r <= r_max) {
    rungs.push_back(static_cast<int>(r));
    r *= eta;
  }
  if (rungs.back() != r_max) rungs.push_back(r_max);
  return rungs;
}

const std::vector<std::pair<int, double>> RungTable::kEmpty;

void RungTable::record(int rung, int trial_id, double y) {
  auto& entries = table_[rung];
  for (const auto& [id, value] : entries) {
    if (id == trial_id) {
      throw std::invalid_argument("rung table: trial already recorded at this rung");
    }
  }
  entries.emplace_back(trial_id, y);
}

const std::vector<std::pair<int, double>>& RungTable::at(int rung) const {
  auto it = table_.find(rung);
  return it == table_.end() ? kEmpty : it->second;
}

namespace {

// Entries ranked by (y, trial id); returns the ids of the best `count`.
std::vector<int> top_ids(const std::vector<std::pair<int, double>>& entries,
                         std::size_t count) {
  std::vector<std::pair<int, double>> sorted(entries);
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  if (count > sorted.size()) count = sorted.size();
  std::vector<int> ids(count);
  for (std::size_t i = 0; i < count; ++i) ids[i] = sorted[i].first;
  return ids;
}

}  // namespace

Decision asha_decide(int trial_id, int rung, double y, const RungTable& table,
                     const std::vector<int>& rungs, int eta) {
  if (std::find(rungs.begin(), rungs.end(), rung) == rungs.end()) {
    throw std::invalid_argument("asha_decide: fidelity is not a rung level");
  }
  if (rung == rungs.back()) return Decision::kCompleted;
  const auto& entries = table.at(rung);
  const auto k = entries.size();
  const auto keep = static_cast<std::size_t>(
      (k + static_cast<std::size_t>(eta) - 1) / static_cast<std::size_t>(eta));
  auto ids = top_ids(entries, keep);
  (void)y;
  return std::find(ids.begin(), ids.end(), trial_id) != ids.end()
             ? Decision::kContinue
             : Decision::kStop;
}

Dataset searcher_dataset(const std::vector<Trial>& trials) {
  Dataset data;
  for (const auto& trial : trials) {
    if (trial.history.empty()) continue;
    data.add(trial.config, trial.history.back().second);
  }
  return data;
}

AshaScheduler::AshaScheduler(AshaOptions opts) : opts_(opts) {
  rungs_ = rung_ladder(opts.r_min, opts.r_max, opts.eta);
}

int AshaScheduler::rung_index(int r) const {
  auto it = std::find(rungs_.begin(), rungs_.end(), r);
  if (it == rungs_.end()) {
    throw std::invalid_argument("scheduler: fidelity is not a rung level");
  }
  return static_cast<int>(it - rungs_.begin());
}

Decision AshaScheduler::on_result(Trial& trial, int r, double y) {
  rung_index(r);
  table_.record(r, trial.id, y);
  trial.history.emplace_back(r, y);
  if (r == rungs_.back()) {
    trial.status = TrialStatus::kCompleted;
    return Decision::kCompleted;
  }
  if (opts_.promotion_variant) {
    // Paused until next_action finds it promotable.
    trial.status = TrialStatus::kStopped;
    return Decision::kStop;
  }
  Decision d = asha_decide(trial.id, r, y, table_, rungs_, opts_.eta);
  if (d == Decision::kStop) trial.status = TrialStatus::kStopped;
  return d;
}

Action AshaScheduler::next_action(const std::vector<Trial>& trials) {
  if (opts_.promotion_variant) {
    for (int k = static_cast<int>(rungs_.size()) - 2; k >= 0; --k) {
      const auto& entries = table_.at(rungs_[static_cast<std::size_t>(k)]);
      auto candidates =
          top_ids(entries, entries.size() / static_cast<std::size_t>(opts_.eta));
      for (int id : candidates) {
        if (promoted_.contains({k, id})) continue;
        // Skip trials still running toward this rung snapshot elsewhere.
        if (trials[static_cast<std::size_t>(id)].status != TrialStatus::kStopped) {
          continue;
        }
        promoted_.insert({k, id});
        return Action{Action::kResume, id, k + 1};
      }
    }
  }
  return Action{Action::kStartNew, -1, 0};
}

}  // namespace cqr

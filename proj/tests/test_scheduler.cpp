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
#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "rng.hpp"

using namespace cqr;

TEST_CASE("rung ladder geometry") {
  CHECK(rung_ladder(1, 27, 3) == std::vector<int>{1, 3, 9, 27});
  CHECK(rung_ladder(1, 20, 3) == std::vector<int>{1, 3, 9, 20});  // capped
  CHECK(rung_ladder(2, 2, 3) == std::vector<int>{2});
  CHECK(rung_ladder(1, 1, 3) == std::vector<int>{1});
  CHECK(rung_ladder(2, 100, 4) == std::vector<int>{2, 8, 32, 100});
  CHECK_THROWS_AS(rung_ladder(0, 10, 3), std::invalid_argument);
  CHECK_THROWS_AS(rung_ladder(5, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(rung_ladder(1, 10, 1), std::invalid_argument);
}

TEST_CASE("rung table rejects duplicates and reads back in order") {
  RungTable table;
  CHECK(table.at(1).empty());
  CHECK_FALSE(table.has(1));
  table.record(1, 0, 0.5);
  table.record(1, 1, 0.3);
  table.record(3, 0, 0.4);
  CHECK(table.has(1));
  REQUIRE(table.at(1).size() == 2);
  CHECK(table.at(1)[0] == std::pair{0, 0.5});
  CHECK(table.at(1)[1] == std::pair{1, 0.3});
  CHECK_THROWS_AS(table.record(1, 0, 0.9), std::invalid_argument);
}

TEST_CASE("asha_decide keeps the top 1/eta, ties to the earlier trial") {
  std::vector<int> rungs{1, 3, 9};
  RungTable table;

  table.record(1, 0, 0.5);
  CHECK(asha_decide(0, 1, 0.5, table, rungs, 3) == Decision::kContinue);  // k=1

  table.record(1, 1, 0.9);
  CHECK(asha_decide(1, 1, 0.9, table, rungs, 3) == Decision::kStop);  // keep=1

  table.record(1, 2, 0.1);
  CHECK(asha_decide(2, 1, 0.1, table, rungs, 3) == Decision::kContinue);

  // k=4 keeps ceil(4/3)=2; an exact tie with an earlier trial for the last
  // kept slot goes to the earlier id.
  table.record(1, 3, 0.5);
  CHECK(asha_decide(3, 1, 0.5, table, rungs, 3) == Decision::kStop);
  CHECK(asha_decide(0, 1, 0.5, table, rungs, 3) == Decision::kContinue);

  // Terminal rung always completes.
  table.record(9, 0, 0.2);
  CHECK(asha_decide(0, 9, 0.2, table, rungs, 3) == Decision::kCompleted);

  CHECK_THROWS_AS(asha_decide(0, 2, 0.2, table, rungs, 3), std::invalid_argument);
}

TEST_CASE("asha_decide agrees with a brute-force oracle") {
  Rng rng(71);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int> rungs{1, 3, 9, 27};
    RungTable table;
    int eta = 2 + static_cast<int>(rng.uniform_index(3));
    std::vector<std::pair<int, double>> seen;  // arrival order at rung 1
    for (int id = 0; id < 40; ++id) {
      double y = std::floor(rng.uniform() * 10.0) / 10.0;  // forces ties
      table.record(1, id, y);
      seen.emplace_back(id, y);

      Decision got = asha_decide(id, 1, y, table, rungs, eta);

      auto ranked = seen;
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& a, const auto& b) {
                         return a.second != b.second ? a.second < b.second
                                                     : a.first < b.first;
                       });
      std::size_t keep = (seen.size() + static_cast<std::size_t>(eta) - 1) /
                         static_cast<std::size_t>(eta);
      bool in_top = false;
      for (std::size_t i = 0; i < keep; ++i) in_top |= ranked[i].first == id;
      CHECK(got == (in_top ? Decision::kContinue : Decision::kStop));
    }
  }
}

TEST_CASE("searcher dataset keeps the highest observed fidelity per trial") {
  Config a{{0.1}}, b{{0.2}}, c{{0.3}};
  std::vector<Trial> trials{
      {0, a, {{1, 5.0}, {3, 4.0}, {9, 3.5}}, TrialStatus::kCompleted},
      {1, b, {{1, 6.0}}, TrialStatus::kStopped},
      {2, c, {}, TrialStatus::kRunning},  // no result yet: excluded
  };
  Dataset data = searcher_dataset(trials);
  REQUIRE(data.size() == 2);
  CHECK(data.rows[0].first == a);
  CHECK(data.rows[0].second == 3.5);
  CHECK(data.rows[1].first == b);
  CHECK(data.rows[1].second == 6.0);
}

TEST_CASE("stopping-variant scheduler trace") {
  AshaScheduler scheduler({1, 9, 3, false});
  CHECK(scheduler.rungs() == std::vector<int>{1, 3, 9});
  CHECK(scheduler.rung_index(3) == 1);
  CHECK_THROWS_AS(scheduler.rung_index(2), std::invalid_argument);

  std::vector<Trial> trials;
  for (int id = 0; id < 3; ++id) {
    trials.push_back({id, Config{{static_cast<double>(id)}}, {}, TrialStatus::kRunning});
  }

  CHECK(scheduler.on_result(trials[0], 1, 0.5) == Decision::kContinue);
  CHECK(trials[0].status == TrialStatus::kRunning);
  CHECK(scheduler.on_result(trials[1], 1, 0.7) == Decision::kStop);
  CHECK(trials[1].status == TrialStatus::kStopped);
  CHECK(scheduler.on_result(trials[2], 1, 0.2) == Decision::kContinue);

  // Stopping variant never resumes: idle workers always start new trials.
  Action action = scheduler.next_action(trials);
  CHECK(action.kind == Action::kStartNew);

  CHECK(scheduler.on_result(trials[0], 3, 0.4) == Decision::kContinue);
  CHECK(scheduler.on_result(trials[0], 9, 0.35) == Decision::kCompleted);
  CHECK(trials[0].status == TrialStatus::kCompleted);
  REQUIRE(trials[0].history.size() == 3);
  CHECK(trials[0].history.back() == std::pair{9, 0.35});
}

TEST_CASE("promotion-variant scheduler trace") {
  AshaScheduler scheduler({1, 9, 3, true});
  std::vector<Trial> trials;
  auto new_trial = [&]() -> Trial& {
    int id = static_cast<int>(trials.size());
    trials.push_back({id, Config{{static_cast<double>(id)}}, {}, TrialStatus::kRunning});
    return trials.back();
  };

  // Non-terminal results pause the trial.
  Trial& t0 = new_trial();
  CHECK(scheduler.on_result(t0, 1, 0.3) == Decision::kStop);
  CHECK(t0.status == TrialStatus::kStopped);
  Trial& t1 = new_trial();
  CHECK(scheduler.on_result(t1, 1, 0.2) == Decision::kStop);
  Trial& t2 = new_trial();
  CHECK(scheduler.on_result(t2, 1, 0.1) == Decision::kStop);

  // keep = floor(3/3) = 1: only the best rung-1 trial is promotable.
  Action a1 = scheduler.next_action(trials);
  CHECK(a1.kind == Action::kResume);
  CHECK(a1.trial_id == 2);
  CHECK(a1.target_rung == 1);  // ladder index of fidelity 3
  trials[2].status = TrialStatus::kRunning;

  // The same trial is never promoted twice from one rung.
  CHECK(scheduler.next_action(trials).kind == Action::kStartNew);

  Trial& t3 = new_trial();
  CHECK(scheduler.on_result(t3, 1, 0.05) == Decision::kStop);
  Action a2 = scheduler.next_action(trials);
  CHECK(a2.kind == Action::kResume);
  CHECK(a2.trial_id == 3);
  trials[3].status = TrialStatus::kRunning;

  // Rung-3 results feed promotions toward the terminal rung the same way.
  CHECK(scheduler.on_result(trials[2], 3, 0.09) == Decision::kStop);
  CHECK(scheduler.on_result(trials[3], 3, 0.04) == Decision::kStop);
  CHECK(scheduler.next_action(trials).kind == Action::kStartNew);  // floor(2/3)=0

  Trial& t4 = new_trial();
  CHECK(scheduler.on_result(t4, 1, 0.5) == Decision::kStop);
  Trial& t5 = new_trial();
  CHECK(scheduler.on_result(t5, 1, 0.45) == Decision::kStop);
  Trial& t6 = new_trial();
  CHECK(scheduler.on_result(t6, 1, 0.01) == Decision::kStop);
  CHECK(scheduler.on_result(t6, 3, 0.03) == Decision::kStop);
  // Now rung 3 holds {t2: .09, t3: .04, t6: .03}: promote t6 to the top.
  Action a3 = scheduler.next_action(trials);
  CHECK(a3.kind == Action::kResume);
  CHECK(a3.trial_id == 6);
  CHECK(a3.target_rung == 2);
  trials[6].status = TrialStatus::kRunning;

  CHECK(scheduler.on_result(trials[6], 9, 0.02) == Decision::kCompleted);
  CHECK(trials[6].status == TrialStatus::kCompleted);
}

TEST_CASE("stopping variant survival rate approaches 1/eta") {
  AshaScheduler scheduler({1, 2, 3, false});  // rungs {1, 2}
  Rng rng(5);
  std::vector<Trial> trials;
  long survived = 0;
  const int n = 3000;
  for (int id = 0; id < n; ++id) {
    trials.push_back({id, Config{{0.0}}, {}, TrialStatus::kRunning});
    Decision d = scheduler.on_result(trials.back(), 1, rng.uniform());
    if (d == Decision::kContinue) ++survived;
  }
  double rate = static_cast<double>(survived) / n;
  CHECK(rate == doctest::Approx(1.0 / 3.0).epsilon(0.15));
}

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

#include "simulator.hpp"

#include <filesystem>
#include <stdexcept>

#include <doctest.h>

using namespace cqr;
namespace fs = std::filesystem;

namespace {

// Noise-free blackbox: y = x, cumulative cost = r seconds.
class LinearBlackbox final : public Blackbox {
 public:
  explicit LinearBlackbox(int r_max)
      : space_({{"x", Domain::uniform(0.0, 1.0)}}), r_max_(r_max) {}

  const ConfigSpace& space() const override { return space_; }
  int r_max() const override { return r_max_; }
  EvalResult evaluate(const Config& config, int r) const override {
    return {std::get<double>(config.values[0]), static_cast<double>(r)};
  }

 private:
  ConfigSpace space_;
  int r_max_;
};

// Fails at a chosen fidelity.
class FailingBlackbox final : public Blackbox {
 public:
  explicit FailingBlackbox(int fail_at)
      : space_({{"x", Domain::uniform(0.0, 1.0)}}), fail_at_(fail_at) {}

  const ConfigSpace& space() const override { return space_; }
  int r_max() const override { return 9; }
  EvalResult evaluate(const Config& config, int r) const override {
    if (r >= fail_at_) throw std::runtime_error("simulated device failure");
    return {std::get<double>(config.values[0]), static_cast<double>(r)};
  }

 private:
  ConfigSpace space_;
  int fail_at_;
};

RunOptions stop_after(long n, int workers = 1, std::uint64_t seed = 0) {
  RunOptions opts;
  opts.workers = workers;
  opts.seed = seed;
  opts.stop.max_results = n;
  return opts;
}

bool same_log(const ExperimentLog& a, const ExperimentLog& b) {
  if (a.dim_names != b.dim_names || a.records.size() != b.records.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    if (x.time != y.time || x.trial_id != y.trial_id ||
        x.fidelity != y.fidelity || x.y != y.y || x.decision != y.decision ||
        x.config != y.config) {
      return false;
    }
  }
  return true;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("cqrhpo_simtest_" + name);
}

}  // namespace

TEST_CASE("cumulative elapsed time is charged as deltas across rungs") {
  LinearBlackbox blackbox(9);
  AshaScheduler scheduler({1, 9, 3, false});
  RandomSearcher searcher;
  ExperimentLog log = run(blackbox, scheduler, searcher, stop_after(4));

  REQUIRE(log.records.size() == 4);
  // Single worker: the first trial survives every rung alone, so its three
  // results land at cumulative times 1, 3 and 9, not 1, 4 and 13.
  CHECK(log.records[0].trial_id == 0);
  CHECK(log.records[0].fidelity == 1);
  CHECK(log.records[0].time == 1.0);
  CHECK(log.records[0].decision == "continue");
  CHECK(log.records[1].fidelity == 3);
  CHECK(log.records[1].time == 3.0);
  CHECK(log.records[2].fidelity == 9);
  CHECK(log.records[2].time == 9.0);
  CHECK(log.records[2].decision == "completed");
  // The next trial starts fresh at t = 9 and pays the full first rung.
  CHECK(log.records[3].trial_id == 1);
  CHECK(log.records[3].time == 10.0);
}

TEST_CASE("suggest overhead delays only fresh trials") {
  LinearBlackbox blackbox(9);
  AshaScheduler scheduler({1, 9, 3, false});
  RandomSearcher searcher;
  RunOptions opts = stop_after(3);
  opts.suggest_overhead = 0.5;
  ExperimentLog log = run(blackbox, scheduler, searcher, opts);
  REQUIRE(log.records.size() == 3);
  CHECK(log.records[0].time == 1.5);  // overhead + rung 1
  CHECK(log.records[1].time == 3.5);  // resume: no extra overhead
  CHECK(log.records[2].time == 9.5);
}

TEST_CASE("event ties break by worker id") {
  LinearBlackbox blackbox(1);  // single rung: everything completes at t = 1
  AshaScheduler scheduler({1, 1, 3, false});
  RandomSearcher searcher;
  ExperimentLog log = run(blackbox, scheduler, searcher, stop_after(4, 4, 3));
  REQUIRE(log.records.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(log.records[static_cast<std::size_t>(i)].time == 1.0);
    CHECK(log.records[static_cast<std::size_t>(i)].trial_id == i);
    CHECK(log.records[static_cast<std::size_t>(i)].decision == "completed");
  }
}

TEST_CASE("the run is deterministic given the seed") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
    SyntheticHeteroskedastic blackbox(seed);
    SearcherOptions sopts;
    sopts.num_candidates = 50;
    QuantileSearcher s1(sopts), s2(sopts);
    AshaScheduler sched1({1, 1, 3, false}), sched2({1, 1, 3, false});
    ExperimentLog a = run(blackbox, sched1, s1, stop_after(30, 4, seed));
    ExperimentLog b = run(blackbox, sched2, s2, stop_after(30, 4, seed));
    CHECK(same_log(a, b));
  }
}

TEST_CASE("stop rules cut the run where requested") {
  LinearBlackbox blackbox(9);
  {
    AshaScheduler scheduler({1, 9, 3, false});
    RandomSearcher searcher;
    ExperimentLog log = run(blackbox, scheduler, searcher, stop_after(17, 3, 1));
    CHECK(log.result_count() == 17);
  }
  {
    AshaScheduler scheduler({1, 9, 3, false});
    RandomSearcher searcher;
    RunOptions opts;
    opts.workers = 3;
    opts.seed = 1;
    opts.stop.max_sim_time = 25.0;
    ExperimentLog log = run(blackbox, scheduler, searcher, opts);
    CHECK(!log.records.empty());
    for (const auto& rec : log.records) CHECK(rec.time <= 25.0);
  }
}

TEST_CASE("a blackbox failure ends the run with an error record") {
  {
    FailingBlackbox blackbox(1);  // fails immediately
    AshaScheduler scheduler({1, 9, 3, false});
    RandomSearcher searcher;
    ExperimentLog log = run(blackbox, scheduler, searcher, stop_after(10));
    REQUIRE(log.error.has_value());
    CHECK(*log.error == "simulated device failure");
    REQUIRE(log.records.size() == 1);
    CHECK(log.records[0].decision == "error");
    CHECK(log.result_count() == 0);
  }
  {
    FailingBlackbox blackbox(3);  // first rung works, promotion fails
    AshaScheduler scheduler({1, 9, 3, false});
    RandomSearcher searcher;
    ExperimentLog log = run(blackbox, scheduler, searcher, stop_after(10));
    REQUIRE(log.error.has_value());
    CHECK(log.result_count() == 1);
    CHECK(log.records.back().decision == "error");
    CHECK(log.records.back().fidelity == 3);
  }
}

TEST_CASE("log CSV round-trips exactly") {
  SyntheticHeteroskedastic blackbox(9);
  AshaScheduler scheduler({1, 1, 3, false});
  RandomSearcher searcher;
  ExperimentLog log = run(blackbox, scheduler, searcher, stop_after(25, 2, 9));

  fs::path path = temp_file("roundtrip.csv");
  log.write_csv(path.string());
  ExperimentLog back = ExperimentLog::read_csv(path.string());
  CHECK(same_log(log, back));
  fs::remove(path);

  CHECK_THROWS(ExperimentLog::read_csv(temp_file("missing.csv").string()));
}

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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace cqr {

long ExperimentLog::result_count() const {
  long n = 0;
  for (const auto& rec : records) {
    if (rec.decision != "error") ++n;
  }
  return n;
}

void ExperimentLog::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("log: cannot write '" + path + "'");
  out << "time,trial,fidelity,y,decision";
  for (const auto& name : dim_names) out << ',' << name;
  out << '\n';
  for (const auto& rec : records) {
    out << format_double(rec.time) << ',' << rec.trial_id << ',' << rec.fidelity
        << ',' << format_double(rec.y) << ',' << rec.decision;
    for (const auto& v : rec.config) out << ',' << v;
    out << '\n';
  }
}

ExperimentLog ExperimentLog::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("log: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("log: empty file");
  ExperimentLog log;
  {
    std::stringstream ss(line);
    std::string field;
    std::size_t i = 0;
    while (std::getline(ss, field, ',')) {
      if (i++ >= 5) log.dim_names.push_back(field);
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5 + log.dim_names.size()) {
      throw std::runtime_error("log: malformed row in '" + path + "'");
    }
    LogRecord rec;
    rec.time = parse_double(fields[0]);
    rec.trial_id = static_cast<int>(parse_double(fields[1]));
    rec.fidelity = static_cast<int>(parse_double(fields[2]));
    rec.y = parse_double(fields[3]);
    rec.decision = fields[4];
    rec.config.assign(fields.begin() + 5, fields.end());
    log.records.push_back(std::move(rec));
  }
  return log;
}

namespace {

struct Event {
  double time = 0.0;
  int worker = -1;
  int trial_id = -1;
  int rung = 0;  // fidelity level being evaluated
  EvalResult result;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.worker != b.worker) return a.worker > b.worker;
    return a.trial_id > b.trial_id;
  }
};

std::vector<std::string> config_strings(const ConfigSpace& space,
                                        const Config& config) {
  std::vector<std::string> out;
  out.reserve(config.values.size());
  for (std::size_t i = 0; i < config.values.size(); ++i) {
    out.push_back(space.value_to_string(i, config.values[i]));
  }
  return out;
}

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::kContinue: return "continue";
    case Decision::kStop: return "stop";
    case Decision::kCompleted: return "completed";
  }
  return "?";
}

}  // namespace

ExperimentLog run(const Blackbox& blackbox, AshaScheduler& scheduler,
                  Searcher& searcher, const RunOptions& options) {
  if (options.workers < 1) throw std::invalid_argument("run: workers must be >= 1");
  const ConfigSpace& space = blackbox.space();

  ExperimentLog log;
  for (std::size_t i = 0; i < space.num_dims(); ++i) {
    log.dim_names.push_back(space.name(i));
  }

  std::vector<Trial> trials;
  std::vector<double> trial_elapsed;  // cumulative seconds consumed per trial
  Rng search_rng(options.seed, 1);
  std::priority_queue<Event, std::vector<Event>, EventLater> queue;
  long results = 0;

  // Schedules `trial` toward fidelity r on `worker`; charges only the delta
  // over what the trial has already consumed.
  auto schedule = [&](int worker, int trial_id, int r, double now,
                      double overhead) -> bool {
    Trial& trial = trials[static_cast<std::size_t>(trial_id)];
    EvalResult res;
    try {
      res = blackbox.evaluate(trial.config, r);
    } catch (const std::exception& e) {
      LogRecord rec;
      rec.time = now;
      rec.trial_id = trial_id;
      rec.fidelity = r;
      rec.y = std::nan("");
      rec.decision = "error";
      rec.config = config_strings(space, trial.config);
      log.records.push_back(std::move(rec));
      log.error = e.what();
      return false;
    }
    double prev = trial_elapsed[static_cast<std::size_t>(trial_id)];
    double delta = std::max(0.0, res.elapsed - prev);
    trial_elapsed[static_cast<std::size_t>(trial_id)] = std::max(prev, res.elapsed);
    queue.push(Event{now + overhead + delta, worker, trial_id, r, res});
    return true;
  };

  auto fill_worker = [&](int worker, double now) -> bool {
    Action action = scheduler.next_action(trials);
    if (action.kind == Action::kResume) {
      Trial& trial = trials[static_cast<std::size_t>(action.trial_id)];
      trial.status = TrialStatus::kRunning;
      int r = scheduler.rungs()[static_cast<std::size_t>(action.target_rung)];
      return schedule(worker, action.trial_id, r, now, 0.0);
    }
    Config config = searcher.suggest(searcher_dataset(trials), space, search_rng);
    int id = static_cast<int>(trials.size());
    trials.push_back(Trial{id, std::move(config), {}, TrialStatus::kRunning});
    trial_elapsed.push_back(0.0);
    return schedule(worker, id, scheduler.rungs().front(), now,
                    options.suggest_overhead);
  };

  for (int w = 0; w < options.workers; ++w) {
    if (!fill_worker(w, 0.0)) return log;
  }

  while (!queue.empty()) {
    Event ev = queue.top();
    queue.pop();
    if (options.stop.max_sim_time && ev.time > *options.stop.max_sim_time) break;

    Trial& trial = trials[static_cast<std::size_t>(ev.trial_id)];
    Decision decision = scheduler.on_result(trial, ev.rung, ev.result.y);

    LogRecord rec;
    rec.time = ev.time;
    rec.trial_id = ev.trial_id;
    rec.fidelity = ev.rung;
    rec.y = ev.result.y;
    rec.decision = decision_name(decision);
    rec.config = config_strings(space, trial.config);
    log.records.push_back(std::move(rec));

    ++results;
    if (options.stop.max_results && results >= *options.stop.max_results) break;

    bool ok;
    if (decision == Decision::kContinue) {
      int next_rung =
          scheduler.rungs()[static_cast<std::size_t>(scheduler.rung_index(ev.rung)) + 1];
      ok = schedule(ev.worker, ev.trial_id, next_rung, ev.time, 0.0);
    } else {
      ok = fill_worker(ev.worker, ev.time);
    }
    if (!ok) return log;
  }
  return log;
}

}  // namespace cqr

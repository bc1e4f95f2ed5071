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

#include "blackbox.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cqr {

namespace {

std::uint64_t splitmix_step(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable stream id for (config, fidelity) so repeated evaluations of the
// same point reproduce the same draw.
std::uint64_t config_stream(const Config& config, int r) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (const auto& v : config.values) {
    if (const auto* x = std::get_if<double>(&v)) {
      h = splitmix_step(h ^ std::bit_cast<std::uint64_t>(*x));
    } else {
      for (char c : std::get<std::string>(v)) {
        h = splitmix_step(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
      }
    }
  }
  return splitmix_step(h ^ static_cast<std::uint64_t>(r));
}

}  // namespace

double synthetic_eval(double x, double kappa, Rng& rng) {
  double s = std::sin(x);
  double rho = s * s + kappa;
  return rho * rng.normal();
}

SyntheticHeteroskedastic::SyntheticHeteroskedastic(std::uint64_t seed, double kappa)
    : space_({{"x", Domain::uniform(0.0, 2.0 * std::numbers::pi)}}),
      kappa_(kappa),
      seed_(seed) {
  if (!(kappa > 0)) throw std::invalid_argument("synthetic: kappa must be > 0");
}

EvalResult SyntheticHeteroskedastic::evaluate(const Config& config, int r) const {
  space_.validate(config);
  double x = std::get<double>(config.values[0]);
  Rng rng(seed_, config_stream(config, r));
  return {synthetic_eval(x, kappa_, rng), static_cast<double>(r)};
}

SyntheticLearningCurves::SyntheticLearningCurves(std::uint64_t seed, int r_max,
                                                 double noise_level)
    : space_({{"x", Domain::uniform(0.0, 1.0)}}),
      r_max_(r_max),
      noise_level_(noise_level),
      seed_(seed) {
  if (r_max < 1) throw std::invalid_argument("synthetic-mf: r_max must be >= 1");
  if (noise_level < 0) throw std::invalid_argument("synthetic-mf: negative noise");
}

double SyntheticLearningCurves::mean_value(double x, int r) const {
  double a = 0.05 + (x - 0.3) * (x - 0.3);
  double g = 2.0 - static_cast<double>(r) / r_max_;
  return a * g;
}

double SyntheticLearningCurves::noise_sd(double x) const {
  double s = std::sin(3.0 * x);
  return noise_level_ * (0.25 + s * s);
}

EvalResult SyntheticLearningCurves::evaluate(const Config& config, int r) const {
  space_.validate(config);
  double x = std::get<double>(config.values[0]);
  double y = mean_value(x, r);
  if (noise_level_ > 0) {
    Rng rng(seed_, config_stream(config, r));
    y += noise_sd(x) * rng.normal();
  }
  return {y, static_cast<double>(r)};
}

std::optional<std::pair<double, double>> SyntheticLearningCurves::known_range()
    const {
  // Extremes of the noiseless objective at r_max over x in [0, 1].
  return std::make_pair(mean_value(0.3, r_max_), mean_value(1.0, r_max_));
}

TabularBlackbox::TabularBlackbox(ConfigSpace space, int r_max,
                                 std::vector<int> fidelities,
                                 std::vector<Row> rows)
    : space_(std::move(space)),
      r_max_(r_max),
      fidelities_(std::move(fidelities)),
      rows_(std::move(rows)) {
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows_) {
    space_.validate(row.config);
    std::string key = space_.config_key(row.config) + '\x1f' + std::to_string(row.r);
    if (!lookup_.emplace(std::move(key), EvalResult{row.y, row.elapsed}).second) {
      throw std::invalid_argument("tabular blackbox: duplicate (config, r) row");
    }
    if (row.r == r_max_) {
      y_min = std::min(y_min, row.y);
      y_max = std::max(y_max, row.y);
    }
  }
  if (y_min <= y_max) range_ = std::make_pair(y_min, y_max);
}

EvalResult TabularBlackbox::evaluate(const Config& config, int r) const {
  auto it = lookup_.find(space_.config_key(config) + '\x1f' + std::to_string(r));
  if (it == lookup_.end()) {
    throw std::out_of_range("tabular blackbox: no row for requested (config, r)");
  }
  return it->second;
}

void TabularBlackbox::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("tabular blackbox: cannot write '" + path + "'");
  nlohmann::json header;
  header["space"] = nlohmann::json::parse(space_.to_json());
  header["r_max"] = r_max_;
  header["fidelities"] = fidelities_;
  out << header.dump() << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.config.values.size(); ++i) {
      out << space_.value_to_string(i, row.config.values[i]) << ',';
    }
    out << row.r << ',' << format_double(row.y) << ',' << format_double(row.elapsed)
        << '\n';
  }
}

TabularBlackbox TabularBlackbox::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("tabular blackbox: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("tabular blackbox: empty file");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("tabular blackbox, line 1: ") + e.what());
  }
  ConfigSpace space = ConfigSpace::from_json(header.at("space").dump());
  int r_max = header.at("r_max").get<int>();
  auto fidelities = header.at("fidelities").get<std::vector<int>>();

  std::vector<Row> rows;
  std::size_t line_no = 1;
  const std::size_t n_dims = space.num_dims();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != n_dims + 3) {
      throw std::invalid_argument("tabular blackbox, line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(n_dims + 3) +
                                  " fields, got " + std::to_string(fields.size()));
    }
    try {
      Row row;
      for (std::size_t i = 0; i < n_dims; ++i) {
        row.config.values.push_back(space.value_from_string(i, fields[i]));
      }
      row.r = static_cast<int>(parse_double(fields[n_dims]));
      row.y = parse_double(fields[n_dims + 1]);
      row.elapsed = parse_double(fields[n_dims + 2]);
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw std::invalid_argument("tabular blackbox, line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return TabularBlackbox(std::move(space), r_max, std::move(fidelities),
                         std::move(rows));
}

std::unique_ptr<Blackbox> make_blackbox(const std::string& task,
                                        std::uint64_t seed) {
  if (task == "synthetic") {
    return std::make_unique<SyntheticHeteroskedastic>(seed);
  }
  if (task == "synthetic-mf") {
    return std::make_unique<SyntheticLearningCurves>(seed, 27, 0.05);
  }
  return std::make_unique<TabularBlackbox>(TabularBlackbox::load(task));
}

}  // namespace cqr

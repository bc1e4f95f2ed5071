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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cqr {

double normalized_regret(double y_t, double y_min, double y_max) {
  if (!(y_max > y_min)) {
    throw std::invalid_argument("normalized_regret: requires y_max > y_min");
  }
  if (!std::isfinite(y_t)) {
    throw std::invalid_argument("normalized_regret: y_t must be finite");
  }
  return (y_t - y_min) / (y_max - y_min);
}

std::vector<RegretPoint> regret_curve(const ExperimentLog& log, double y_min,
                                      double y_max) {
  std::vector<RegretPoint> curve;
  double best = std::numeric_limits<double>::infinity();
  long count = 0;
  for (const auto& rec : log.records) {
    if (rec.decision == "error") continue;
    ++count;
    best = std::min(best, rec.y);
    curve.push_back({rec.time, count, best, normalized_regret(best, y_min, y_max)});
  }
  return curve;
}

double regret_at_time_fraction(const std::vector<RegretPoint>& curve,
                               double fraction, double total_time) {
  double t = fraction * total_time;
  double regret = std::numeric_limits<double>::infinity();
  for (const auto& p : curve) {
    if (p.time > t) break;
    regret = p.regret;
  }
  return regret;
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::vector<std::vector<double>> average_rank(
    const std::vector<std::vector<double>>& regret_per_method) {
  if (regret_per_method.size() < 2) {
    throw std::invalid_argument("average_rank: need at least 2 methods");
  }
  const std::size_t n_fractions = regret_per_method[0].size();
  for (const auto& row : regret_per_method) {
    if (row.size() != n_fractions) {
      throw std::invalid_argument("average_rank: methods must share the fraction grid");
    }
  }
  std::vector<std::vector<double>> out(regret_per_method.size(),
                                       std::vector<double>(n_fractions));
  std::vector<double> column(regret_per_method.size());
  for (std::size_t f = 0; f < n_fractions; ++f) {
    for (std::size_t m = 0; m < regret_per_method.size(); ++m) {
      column[m] = regret_per_method[m][f];
    }
    auto ranks = fractional_ranks(column);
    for (std::size_t m = 0; m < regret_per_method.size(); ++m) out[m][f] = ranks[m];
  }
  return out;
}

double calibration_error(
    const std::vector<std::vector<double>>& predictions_per_level,
    std::span<const double> y, std::span<const double> levels) {
  if (predictions_per_level.size() != levels.size()) {
    throw std::invalid_argument("calibration_error: levels/predictions mismatch");
  }
  if (y.empty()) throw std::invalid_argument("calibration_error: empty targets");
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (!(levels[j] > 0.0 && levels[j] < 1.0)) {
      throw std::invalid_argument("calibration_error: levels must lie in (0, 1)");
    }
    const auto& preds = predictions_per_level[j];
    if (preds.size() != y.size()) {
      throw std::invalid_argument("calibration_error: prediction length mismatch");
    }
    long below = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] < preds[i]) ++below;
    }
    double p = static_cast<double>(below) / static_cast<double>(y.size());
    sum_sq += (p - levels[j]) * (p - levels[j]);
  }
  return std::sqrt(sum_sq);
}

double rmse_from_quantiles(
    const std::vector<std::vector<double>>& predictions_per_level,
    std::span<const double> y) {
  if (predictions_per_level.empty()) {
    throw std::invalid_argument("rmse_from_quantiles: no quantile levels");
  }
  if (y.empty()) throw std::invalid_argument("rmse_from_quantiles: empty targets");
  for (const auto& preds : predictions_per_level) {
    if (preds.size() != y.size()) {
      throw std::invalid_argument("rmse_from_quantiles: prediction length mismatch");
    }
  }
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double mean = 0.0;
    for (const auto& preds : predictions_per_level) mean += preds[i];
    mean /= static_cast<double>(predictions_per_level.size());
    sum_sq += (mean - y[i]) * (mean - y[i]);
  }
  return std::sqrt(sum_sq / static_cast<double>(y.size()));
}

}  // namespace cqr

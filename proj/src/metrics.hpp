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

#ifndef CQRHPO_METRICS_HPP
#define CQRHPO_METRICS_HPP

#include <span>
#include <vector>

#include "simulator.hpp"

namespace cqr {

// (y_t - y_min) / (y_max - y_min); deliberately not clamped so bad
// y_min/y_max choices surface as values outside [0, 1].
double normalized_regret(double y_t, double y_min, double y_max);

struct RegretPoint {
  double time = 0.0;
  long count = 0;  // results observed so far
  double best = 0.0;
  double regret = 0.0;
};

// Best-so-far trajectory over the log's result records.
std::vector<RegretPoint> regret_curve(const ExperimentLog& log, double y_min,
                                      double y_max);

// Best-so-far regret at `fraction` of `total_time` (step interpolation;
// +infinity before the first result).
double regret_at_time_fraction(const std::vector<RegretPoint>& curve,
                               double fraction, double total_time);

// Competition ranks, 1 = best (lowest value), ties get the average of the
// positions they span.
std::vector<double> fractional_ranks(std::span<const double> values);

// Per-method rank trajectory from per-method regret values on a shared
// fraction grid: input [method][fraction], output of the same shape.
std::vector<std::vector<double>> average_rank(
    const std::vector<std::vector<double>>& regret_per_method);

// Root-sum-square gap between empirical exceedance frequencies and nominal
// levels: P(alpha_j) is the fraction of points with y strictly below the
// level-j prediction. predictions_per_level is [level][point].
double calibration_error(
    const std::vector<std::vector<double>>& predictions_per_level,
    std::span<const double> y, std::span<const double> levels);

// RMSE of the per-point mean of the predicted quantiles against y.
double rmse_from_quantiles(
    const std::vector<std::vector<double>>& predictions_per_level,
    std::span<const double> y);

}  // namespace cqr

#endif  // CQRHPO_METRICS_HPP

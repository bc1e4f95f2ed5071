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

#ifndef CQRHPO_CONFORMAL_HPP
#define CQRHPO_CONFORMAL_HPP

#include <span>
#include <utility>
#include <vector>

namespace cqr {

// Split-conformal calibration of quantile-pair intervals [q_lo(x), q_hi(x)]
// with nominal miscoverage 2 * alpha_j.

// Per-point score max(lo - y, y - hi): negative iff y is strictly inside
// the predicted interval; the magnitude is the distance to the closest
// interval endpoint.
std::vector<double> conformity_scores(std::span<const double> pred_lo,
                                      std::span<const double> pred_hi,
                                      std::span<const double> y);

// The (1 - 2*alpha_j)(1 + 1/val_size)-th empirical quantile of the scores,
// "higher" convention (1-based index ceil(level * n), clamped to [1, n]);
// a level >= 1 returns the maximum score. val_size must equal |scores|.
double gamma_correction(std::vector<double> scores, double alpha_j,
                        std::size_t val_size);

// Widened (or, for negative gamma, shrunk) interval (lo - gamma, hi + gamma).
// A crossed result is a valid empty interval.
std::pair<double, double> conformalize(double lo, double hi, double gamma);

}  // namespace cqr

#endif  // CQRHPO_CONFORMAL_HPP

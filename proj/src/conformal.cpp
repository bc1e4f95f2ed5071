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

#include "conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqr {

std::vector<double> conformity_scores(std::span<const double> pred_lo,
                                      std::span<const double> pred_hi,
                                      std::span<const double> y) {
  if (pred_lo.size() != pred_hi.size() || pred_lo.size() != y.size()) {
    throw std::invalid_argument("conformity_scores: length mismatch");
  }
  if (y.empty()) throw std::invalid_argument("conformity_scores: empty input");
  std::vector<double> scores(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    scores[i] = std::max(pred_lo[i] - y[i], y[i] - pred_hi[i]);
  }
  return scores;
}

double gamma_correction(std::vector<double> scores, double alpha_j,
                        std::size_t val_size) {
  if (scores.empty()) throw std::invalid_argument("gamma_correction: empty scores");
  if (scores.size() != val_size) {
    throw std::invalid_argument("gamma_correction: val_size mismatch");
  }
  std::sort(scores.begin(), scores.end());
  const auto n = static_cast<double>(val_size);
  const double level = (1.0 - 2.0 * alpha_j) * (1.0 + 1.0 / n);
  if (level >= 1.0) return scores.back();
  auto k = static_cast<std::ptrdiff_t>(std::ceil(level * n));
  k = std::clamp<std::ptrdiff_t>(k, 1, static_cast<std::ptrdiff_t>(val_size));
  return scores[static_cast<std::size_t>(k - 1)];
}

std::pair<double, double> conformalize(double lo, double hi, double gamma) {
  return {lo - gamma, hi + gamma};
}

}  // namespace cqr

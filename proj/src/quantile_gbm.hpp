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

#ifndef CQRHPO_QUANTILE_GBM_HPP
#define CQRHPO_QUANTILE_GBM_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace cqr {

// Asymmetric quantile (pinball) loss: alpha*(y - y_hat) on under-prediction,
// (1 - alpha)*(y_hat - y) otherwise. Its expected minimizer is the
// alpha-quantile.
double pinball_loss(double y, double y_hat, double alpha);

// Empirical alpha-quantile under the "higher" convention: sorted ascending,
// element at 1-based index ceil(alpha * n), clamped to [1, n].
double empirical_quantile(std::vector<double> values, double alpha);
double empirical_quantile_sorted(std::span<const double> sorted, double alpha);

struct GbmParams {
  int n_trees = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  int min_samples_leaf = 5;
  std::uint64_t seed = 0;  // reserved; fitting is fully deterministic
};

// One gradient-boosted quantile regressor: constant base prediction (the
// empirical alpha-quantile of the targets) plus small regression trees fit
// to pinball subgradients, with leaves refit to the quantile of the
// residuals. A boosting stage is kept only if it does not increase the
// training loss.
class QuantileModel {
 public:
  static QuantileModel fit(const std::vector<std::vector<double>>& features,
                           const std::vector<double>& targets, double alpha,
                           const GbmParams& params);

  double predict(std::span<const double> x) const;

  double alpha() const { return alpha_; }
  double base_prediction() const { return base_; }
  std::size_t num_trees() const { return trees_.size(); }

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0;  // leaf value, learning rate included
    int left = -1;
    int right = -1;
  };

  double alpha_ = 0.5;
  double base_ = 0.0;
  std::size_t n_features_ = 0;
  std::vector<std::vector<Node>> trees_;
};

}  // namespace cqr

#endif  // CQRHPO_QUANTILE_GBM_HPP

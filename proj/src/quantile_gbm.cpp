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

#include "quantile_gbm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cqr {

double pinball_loss(double y, double y_hat, double alpha) {
  double diff = y - y_hat;
  return diff > 0 ? alpha * diff : (1.0 - alpha) * (-diff);
}

double empirical_quantile_sorted(std::span<const double> sorted, double alpha) {
  if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty input");
  auto n = static_cast<std::ptrdiff_t>(sorted.size());
  auto k = static_cast<std::ptrdiff_t>(std::ceil(alpha * static_cast<double>(n)));
  k = std::clamp<std::ptrdiff_t>(k, 1, n);
  return sorted[static_cast<std::size_t>(k - 1)];
}

double empirical_quantile(std::vector<double> values, double alpha) {
  std::sort(values.begin(), values.end());
  return empirical_quantile_sorted(values, alpha);
}

namespace {

struct SplitResult {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // sum_l^2/n_l + sum_r^2/n_r, higher is better
};

// Greedy variance-reduction split over pseudo-residuals g. Maximizing
// sum^2/n over the two children is equivalent to minimizing their SSE.
// Ties go to the lowest feature index, then the lowest threshold.
SplitResult best_split(const std::vector<std::vector<double>>& features,
                       const std::vector<double>& g,
                       const std::vector<int>& idx, int min_leaf) {
  const int n = static_cast<int>(idx.size());
  SplitResult best;
  double parent_sum = 0.0;
  for (int i : idx) parent_sum += g[static_cast<std::size_t>(i)];
  const double parent_score = parent_sum * parent_sum / n;

  const std::size_t n_features = features[0].size();
  std::vector<int> order(idx);
  for (std::size_t f = 0; f < n_features; ++f) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double xa = features[static_cast<std::size_t>(a)][f];
      double xb = features[static_cast<std::size_t>(b)][f];
      return xa != xb ? xa < xb : a < b;
    });
    double left_sum = 0.0;
    for (int p = 1; p < n; ++p) {
      left_sum += g[static_cast<std::size_t>(order[static_cast<std::size_t>(p - 1)])];
      if (p < min_leaf || n - p < min_leaf) continue;
      double xl = features[static_cast<std::size_t>(order[static_cast<std::size_t>(p - 1)])][f];
      double xr = features[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])][f];
      if (!(xl < xr)) continue;
      double right_sum = parent_sum - left_sum;
      double score = left_sum * left_sum / p + right_sum * right_sum / (n - p);
      if (score <= parent_score + 1e-12) continue;
      double threshold = xl + 0.5 * (xr - xl);
      if (!best.found || score > best.score) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = threshold;
        best.score = score;
      }
    }
  }
  return best;
}

}  // namespace

QuantileModel QuantileModel::fit(const std::vector<std::vector<double>>& features,
                                 const std::vector<double>& targets, double alpha,
                                 const GbmParams& params) {
  if (features.empty() || targets.empty()) {
    throw std::invalid_argument("quantile fit: empty dataset");
  }
  if (features.size() != targets.size()) {
    throw std::invalid_argument("quantile fit: features/targets length mismatch");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("quantile fit: alpha must lie in (0, 1)");
  }
  const std::size_t n = features.size();
  const std::size_t n_features = features[0].size();
  for (const auto& row : features) {
    if (row.size() != n_features) {
      throw std::invalid_argument("quantile fit: ragged feature matrix");
    }
  }
  if (params.n_trees < 0 || params.max_depth < 1 || params.min_samples_leaf < 1 ||
      !(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
    throw std::invalid_argument("quantile fit: invalid GbmParams");
  }

  QuantileModel model;
  model.alpha_ = alpha;
  model.n_features_ = n_features;
  model.base_ = empirical_quantile(targets, alpha);

  std::vector<double> pred(n, model.base_);
  std::vector<double> g(n);  // pinball subgradient direction per sample
  auto mean_loss = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += pinball_loss(targets[i], pred[i], alpha);
    return s / static_cast<double>(n);
  };
  double current_loss = mean_loss();

  for (int t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double r = targets[i] - pred[i];
      g[i] = r > 0 ? alpha : (r < 0 ? -(1.0 - alpha) : alpha - 0.5);
    }

    std::vector<Node> tree;
    std::vector<std::pair<int, std::vector<int>>> pending;  // (node, samples)
    std::vector<std::pair<int, std::vector<int>>> leaves;
    {
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      tree.push_back({});
      pending.emplace_back(0, std::move(all));
    }
    std::vector<int> depth_of{0};
    while (!pending.empty()) {
      auto [node_id, idx] = std::move(pending.back());
      pending.pop_back();
      int depth = depth_of[static_cast<std::size_t>(node_id)];
      SplitResult split;
      if (depth < params.max_depth &&
          static_cast<int>(idx.size()) >= 2 * params.min_samples_leaf) {
        split = best_split(features, g, idx, params.min_samples_leaf);
      }
      if (!split.found) {
        leaves.emplace_back(node_id, std::move(idx));
        continue;
      }
      std::vector<int> left_idx, right_idx;
      for (int i : idx) {
        if (features[static_cast<std::size_t>(i)][static_cast<std::size_t>(split.feature)] <=
            split.threshold) {
          left_idx.push_back(i);
        } else {
          right_idx.push_back(i);
        }
      }
      int left_id = static_cast<int>(tree.size());
      tree.push_back({});
      depth_of.push_back(depth + 1);
      int right_id = static_cast<int>(tree.size());
      tree.push_back({});
      depth_of.push_back(depth + 1);
      tree[static_cast<std::size_t>(node_id)] = {split.feature, split.threshold, 0.0,
                                                 left_id, right_id};
      pending.emplace_back(left_id, std::move(left_idx));
      pending.emplace_back(right_id, std::move(right_idx));
    }

    // Leaf refit on the true loss: the optimal constant under pinball loss
    // is the empirical alpha-quantile of the residuals in the leaf.
    bool any_split = tree.size() > 1;
    for (auto& [node_id, idx] : leaves) {
      std::vector<double> residuals;
      residuals.reserve(idx.size());
      for (int i : idx) residuals.push_back(targets[static_cast<std::size_t>(i)] -
                                            pred[static_cast<std::size_t>(i)]);
      tree[static_cast<std::size_t>(node_id)].value =
          params.learning_rate * empirical_quantile(std::move(residuals), alpha);
    }
    if (!any_split && tree[0].value == 0.0) break;  // nothing left to learn

    std::vector<double> candidate(pred);
    for (auto& [node_id, idx] : leaves) {
      for (int i : idx) candidate[static_cast<std::size_t>(i)] +=
          tree[static_cast<std::size_t>(node_id)].value;
    }
    double candidate_loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      candidate_loss += pinball_loss(targets[i], candidate[i], alpha);
    }
    candidate_loss /= static_cast<double>(n);
    if (candidate_loss > current_loss + 1e-12) break;  // stage rejected

    pred = std::move(candidate);
    current_loss = candidate_loss;
    model.trees_.push_back(std::move(tree));
  }
  return model;
}

double QuantileModel::predict(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw std::invalid_argument("quantile predict: feature length mismatch");
  }
  double out = base_;
  for (const auto& tree : trees_) {
    int node = 0;
    while (tree[static_cast<std::size_t>(node)].feature >= 0) {
      const Node& nd = tree[static_cast<std::size_t>(node)];
      node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                     : nd.right;
    }
    out += tree[static_cast<std::size_t>(node)].value;
  }
  return out;
}

}  // namespace cqr

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

#include "searcher.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "conformal.hpp"

namespace cqr {

std::pair<Dataset, Dataset> split_train_val(const Dataset& data,
                                            double val_fraction, Rng& rng) {
  const std::size_t n = data.size();
  if (n < 2) throw std::invalid_argument("split_train_val: need at least 2 rows");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("split_train_val: fraction must lie in (0, 1)");
  }
  std::size_t n_val = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n))));
  if (n_val >= n) n_val = n - 1;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) {  // Fisher-Yates on our stream
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }
  Dataset train, val;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = data.rows[order[i]];
    (i < n_val ? val : train).rows.push_back(row);
  }
  return {std::move(train), std::move(val)};
}

std::vector<double> quantile_levels(int m) {
  if (m < 2 || m % 2 != 0) {
    throw std::invalid_argument("quantile_levels: m must be even and >= 2");
  }
  std::vector<double> levels(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) {
    levels[static_cast<std::size_t>(j - 1)] = static_cast<double>(j) / (m + 1);
  }
  return levels;
}

double Surrogate::sample_value(int j, std::span<const double> x) const {
  const int m = static_cast<int>(models.size());
  double q = models[static_cast<std::size_t>(j - 1)].predict(x);
  if (j <= m / 2) return q - gamma[static_cast<std::size_t>(j - 1)];
  return q + gamma[static_cast<std::size_t>(m - j)];  // pair index m + 1 - j
}

Surrogate fit_surrogate(const Dataset& data, const ConfigSpace& space,
                        const SearcherOptions& opts, Rng& rng) {
  auto [train, val] = split_train_val(data, opts.val_fraction, rng);

  std::vector<std::vector<double>> train_x;
  std::vector<double> train_y;
  train_x.reserve(train.size());
  for (const auto& [config, z] : train.rows) {
    train_x.push_back(space.encode(config));
    train_y.push_back(z);
  }

  Surrogate s;
  s.levels = quantile_levels(opts.m);
  s.models.reserve(s.levels.size());
  for (double alpha : s.levels) {
    s.models.push_back(QuantileModel::fit(train_x, train_y, alpha, opts.gbm));
  }
  s.gamma.assign(static_cast<std::size_t>(opts.m / 2), 0.0);

  if (opts.conformalize &&
      data.size() > static_cast<std::size_t>(opts.conformal_threshold)) {
    std::vector<std::vector<double>> val_x;
    std::vector<double> val_y;
    val_x.reserve(val.size());
    for (const auto& [config, z] : val.rows) {
      val_x.push_back(space.encode(config));
      val_y.push_back(z);
    }
    const int m = opts.m;
    for (int j = 1; j <= m / 2; ++j) {
      std::vector<double> lo(val_y.size()), hi(val_y.size());
      for (std::size_t i = 0; i < val_y.size(); ++i) {
        lo[i] = s.models[static_cast<std::size_t>(j - 1)].predict(val_x[i]);
        hi[i] = s.models[static_cast<std::size_t>(m - j)].predict(val_x[i]);
      }
      auto scores = conformity_scores(lo, hi, val_y);
      s.gamma[static_cast<std::size_t>(j - 1)] = gamma_correction(
          std::move(scores), s.levels[static_cast<std::size_t>(j - 1)],
          val_y.size());
    }
    s.conformalized = true;
  }
  return s;
}

Config QuantileSearcher::suggest(const Dataset& data, const ConfigSpace& space,
                                 Rng& rng) {
  if (data.size() < static_cast<std::size_t>(opts_.n_init)) {
    return space.sample(rng);
  }
  Surrogate surrogate = fit_surrogate(data, space, opts_, rng);

  Config best_config;
  double best_value = std::numeric_limits<double>::infinity();
  // One rng stream, advanced in a fixed order: per candidate, the config
  // draw first, then the quantile index.
  for (int i = 0; i < opts_.num_candidates; ++i) {
    Config candidate = space.sample(rng);
    int j = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(opts_.m))) + 1;
    double value = surrogate.sample_value(j, space.encode(candidate));
    if (value < best_value) {  // strict keeps the lowest candidate index on ties
      best_value = value;
      best_config = std::move(candidate);
    }
  }
  return best_config;
}

std::unique_ptr<Searcher> make_searcher(const std::string& name,
                                        const SearcherOptions& opts) {
  if (name == "rs") return std::make_unique<RandomSearcher>();
  if (name == "qr") {
    SearcherOptions qr = opts;
    qr.conformalize = false;
    return std::make_unique<QuantileSearcher>(qr);
  }
  if (name == "cqr") {
    SearcherOptions cqr_opts = opts;
    cqr_opts.conformalize = true;
    return std::make_unique<QuantileSearcher>(cqr_opts);
  }
  throw std::invalid_argument("unknown searcher '" + name + "'");
}

}  // namespace cqr

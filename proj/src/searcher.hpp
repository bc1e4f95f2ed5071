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

#ifndef CQRHPO_SEARCHER_HPP
#define CQRHPO_SEARCHER_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "config_space.hpp"
#include "quantile_gbm.hpp"
#include "rng.hpp"

namespace cqr {

struct Dataset {
  std::vector<std::pair<Config, double>> rows;

  std::size_t size() const { return rows.size(); }
  void add(Config config, double target) {
    rows.emplace_back(std::move(config), target);
  }
};

// Disjoint shuffled partition with |val| = max(1, round(fraction * n)).
// Requires n >= 2 and 0 < fraction < 1.
std::pair<Dataset, Dataset> split_train_val(const Dataset& data,
                                            double val_fraction, Rng& rng);

// The m quantile levels j / (m + 1), ascending. m must be even and >= 2.
std::vector<double> quantile_levels(int m);

struct SearcherOptions {
  int m = 4;
  int num_candidates = 2000;
  double val_fraction = 0.1;
  int n_init = 10;             // random suggestions before any model fit
  int conformal_threshold = 32;  // below this, gamma stays 0 (plain QR)
  bool conformalize = true;      // false gives the QR ablation
  GbmParams gbm;
};

// m fitted quantile models over the alpha grid plus the per-pair conformal
// corrections (all zero when calibration was skipped).
struct Surrogate {
  std::vector<double> levels;          // ascending, size m
  std::vector<QuantileModel> models;   // one per level
  std::vector<double> gamma;           // size m/2, indexed by pair j
  bool conformalized = false;

  // Thompson draw for quantile index j in [1, m]: lower quantiles widen
  // downward by gamma_j, upper ones widen upward by gamma_{m+1-j}.
  double sample_value(int j, std::span<const double> x) const;
};

Surrogate fit_surrogate(const Dataset& data, const ConfigSpace& space,
                        const SearcherOptions& opts, Rng& rng);

class Searcher {
 public:
  virtual ~Searcher() = default;
  virtual Config suggest(const Dataset& data, const ConfigSpace& space,
                         Rng& rng) = 0;
};

class RandomSearcher final : public Searcher {
 public:
  Config suggest(const Dataset&, const ConfigSpace& space, Rng& rng) override {
    return space.sample(rng);
  }
};

// Conformalized-quantile-regression suggestion: rebuild the surrogate from
// scratch, then pick the minimizer of one independent Thompson draw per
// uniformly sampled candidate.
class QuantileSearcher final : public Searcher {
 public:
  explicit QuantileSearcher(SearcherOptions opts) : opts_(std::move(opts)) {}

  Config suggest(const Dataset& data, const ConfigSpace& space,
                 Rng& rng) override;

  const SearcherOptions& options() const { return opts_; }

 private:
  SearcherOptions opts_;
};

// "rs", "qr" or "cqr".
std::unique_ptr<Searcher> make_searcher(const std::string& name,
                                        const SearcherOptions& opts);

}  // namespace cqr

#endif  // CQRHPO_SEARCHER_HPP

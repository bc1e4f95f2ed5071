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

#ifndef CQRHPO_BLACKBOX_HPP
#define CQRHPO_BLACKBOX_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "config_space.hpp"
#include "rng.hpp"

namespace cqr {

struct EvalResult {
  double y = 0.0;
  double elapsed = 0.0;  // cumulative simulated seconds to reach fidelity r
};

class Blackbox {
 public:
  virtual ~Blackbox() = default;
  virtual const ConfigSpace& space() const = 0;
  virtual int r_max() const = 0;
  // Deterministic given (config, r, blackbox seed).
  virtual EvalResult evaluate(const Config& config, int r) const = 0;
  virtual std::optional<std::pair<double, double>> known_range() const {
    return std::nullopt;
  }
};

// One heteroskedastic draw: rho(x) * eps with rho(x) = sin(x)^2 + kappa.
double synthetic_eval(double x, double kappa, Rng& rng);

// Zero-mean noise-only objective over x in [0, 2*pi]; the informative signal
// is the x-dependent spread. Single fidelity (r_max = 1).
class SyntheticHeteroskedastic final : public Blackbox {
 public:
  explicit SyntheticHeteroskedastic(std::uint64_t seed, double kappa = 0.3);

  const ConfigSpace& space() const override { return space_; }
  int r_max() const override { return 1; }
  EvalResult evaluate(const Config& config, int r) const override;

  double kappa() const { return kappa_; }

 private:
  ConfigSpace space_;
  double kappa_;
  std::uint64_t seed_;
};

// Multi-fidelity objective with non-crossing learning curves:
// y(x, r) = a(x) * g(r) + sd(x) * eps, a(x) = 0.05 + (x - 0.3)^2 over
// x in [0, 1], g(r) = 2 - r / r_max monotone decreasing. With zero noise,
// curve dominance at any fidelity implies dominance at every fidelity.
class SyntheticLearningCurves final : public Blackbox {
 public:
  SyntheticLearningCurves(std::uint64_t seed, int r_max = 27,
                          double noise_level = 0.0);

  const ConfigSpace& space() const override { return space_; }
  int r_max() const override { return r_max_; }
  EvalResult evaluate(const Config& config, int r) const override;
  std::optional<std::pair<double, double>> known_range() const override;

  double mean_value(double x, int r) const;
  double noise_sd(double x) const;

 private:
  ConfigSpace space_;
  int r_max_;
  double noise_level_;
  std::uint64_t seed_;
};

// Exact-lookup blackbox backed by a file: a JSON header line
// {"space": ..., "r_max": ..., "fidelities": [...]} followed by CSV rows
// <dim1>,...,<dimK>,<r>,<y>,<elapsed_seconds>.
class TabularBlackbox final : public Blackbox {
 public:
  struct Row {
    Config config;
    int r = 0;
    double y = 0.0;
    double elapsed = 0.0;
  };

  TabularBlackbox(ConfigSpace space, int r_max, std::vector<int> fidelities,
                  std::vector<Row> rows);

  const ConfigSpace& space() const override { return space_; }
  int r_max() const override { return r_max_; }
  EvalResult evaluate(const Config& config, int r) const override;
  std::optional<std::pair<double, double>> known_range() const override {
    return range_;
  }

  const std::vector<int>& fidelities() const { return fidelities_; }
  const std::vector<Row>& rows() const { return rows_; }

  void save(const std::string& path) const;
  static TabularBlackbox load(const std::string& path);

 private:
  ConfigSpace space_;
  int r_max_;
  std::vector<int> fidelities_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, EvalResult> lookup_;
  std::optional<std::pair<double, double>> range_;
};

// Task factory: "synthetic", "synthetic-mf", or a tabular file path.
std::unique_ptr<Blackbox> make_blackbox(const std::string& task,
                                        std::uint64_t seed);

}  // namespace cqr

#endif  // CQRHPO_BLACKBOX_HPP

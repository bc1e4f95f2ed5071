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

#ifndef CQRHPO_CONFIG_SPACE_HPP
#define CQRHPO_CONFIG_SPACE_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rng.hpp"

namespace cqr {

// Shortest round-trip decimal formatting; the serialization used by every
// file format in this project.
std::string format_double(double v);
double parse_double(std::string_view s);

enum class DomainKind { kCategorical, kUniform, kLogUniform, kFiniteRange };

struct Domain {
  DomainKind kind;
  std::vector<std::string> labels;  // categorical
  double lo = 0.0;                  // uniform / log_uniform
  double hi = 0.0;
  std::vector<double> values;       // finite_range, sorted ascending
  bool log_scale = false;           // finite_range only

  static Domain categorical(std::vector<std::string> labels);
  static Domain uniform(double lo, double hi);
  static Domain log_uniform(double lo, double hi);
  static Domain finite_range(std::vector<double> values, bool log_scale = false);
};

// One value per dimension: label for categorical, real otherwise.
using ConfigValue = std::variant<std::string, double>;

struct Config {
  std::vector<ConfigValue> values;
  bool operator==(const Config&) const = default;
};

class ConfigSpace {
 public:
  ConfigSpace() = default;
  // Throws std::invalid_argument on duplicate names or empty dim list.
  ConfigSpace(std::vector<std::pair<std::string, Domain>> dims);

  static ConfigSpace from_json(const std::string& json_text);
  std::string to_json() const;

  std::size_t num_dims() const { return dims_.size(); }
  const std::string& name(std::size_t i) const { return dims_[i].first; }
  const Domain& domain(std::size_t i) const { return dims_[i].second; }

  Config sample(Rng& rng) const;

  // Throws std::invalid_argument if any coordinate is outside its domain.
  void validate(const Config& config) const;
  bool contains(const Config& config) const;

  // One-hot for categoricals, value (log-space for log_uniform and
  // log-scaled finite ranges) otherwise. Length is encoded_size() always.
  std::vector<double> encode(const Config& config) const;
  std::size_t encoded_size() const { return encoded_size_; }

  // Canonical per-dimension string form; exact key for tabular lookup.
  std::string value_to_string(std::size_t i, const ConfigValue& v) const;
  ConfigValue value_from_string(std::size_t i, std::string_view s) const;
  std::string config_key(const Config& config) const;

  std::string config_to_json(const Config& config) const;
  Config config_from_json(const std::string& json_text) const;

 private:
  std::vector<std::pair<std::string, Domain>> dims_;
  std::size_t encoded_size_ = 0;
};

}  // namespace cqr

#endif  // CQRHPO_CONFIG_SPACE_HPP

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

#include "config_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace cqr {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

Domain Domain::categorical(std::vector<std::string> labels) {
  if (labels.empty()) throw std::invalid_argument("categorical: empty label set");
  std::set<std::string> uniq(labels.begin(), labels.end());
  if (uniq.size() != labels.size()) {
    throw std::invalid_argument("categorical: duplicate labels");
  }
  Domain d;
  d.kind = DomainKind::kCategorical;
  d.labels = std::move(labels);
  return d;
}

Domain Domain::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("uniform: requires lo < hi");
  Domain d;
  d.kind = DomainKind::kUniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Domain Domain::log_uniform(double lo, double hi) {
  if (!(lo > 0)) throw std::invalid_argument("log_uniform: requires lo > 0");
  if (!(lo < hi)) throw std::invalid_argument("log_uniform: requires lo < hi");
  Domain d;
  d.kind = DomainKind::kLogUniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Domain Domain::finite_range(std::vector<double> values, bool log_scale) {
  if (values.empty()) throw std::invalid_argument("finite_range: empty value set");
  if (!std::is_sorted(values.begin(), values.end())) {
    throw std::invalid_argument("finite_range: values must be sorted ascending");
  }
  if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
    throw std::invalid_argument("finite_range: duplicate values");
  }
  if (log_scale && values.front() <= 0) {
    throw std::invalid_argument("finite_range: log scale requires positive values");
  }
  Domain d;
  d.kind = DomainKind::kFiniteRange;
  d.values = std::move(values);
  d.log_scale = log_scale;
  return d;
}

namespace {

std::size_t encoded_width(const Domain& d) {
  return d.kind == DomainKind::kCategorical ? d.labels.size() : 1;
}

}  // namespace

ConfigSpace::ConfigSpace(std::vector<std::pair<std::string, Domain>> dims)
    : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("config space: no dimensions");
  std::set<std::string> names;
  for (const auto& [name, domain] : dims_) {
    if (!names.insert(name).second) {
      throw std::invalid_argument("config space: duplicate dimension '" + name + "'");
    }
    encoded_size_ += encoded_width(domain);
  }
}

ConfigSpace ConfigSpace::from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config space: ") + e.what());
  }
  if (!j.contains("dims") || !j["dims"].is_array()) {
    throw std::invalid_argument("config space: missing 'dims' array");
  }
  std::vector<std::pair<std::string, Domain>> dims;
  for (const auto& dj : j["dims"]) {
    if (!dj.contains("name") || !dj.contains("kind")) {
      throw std::invalid_argument("config space: dim needs 'name' and 'kind'");
    }
    std::string name = dj["name"].get<std::string>();
    std::string kind = dj["kind"].get<std::string>();
    if (kind == "categorical") {
      dims.emplace_back(name, Domain::categorical(
                                  dj.at("values").get<std::vector<std::string>>()));
    } else if (kind == "uniform") {
      dims.emplace_back(name, Domain::uniform(dj.at("lo").get<double>(),
                                              dj.at("hi").get<double>()));
    } else if (kind == "log_uniform") {
      dims.emplace_back(name, Domain::log_uniform(dj.at("lo").get<double>(),
                                                  dj.at("hi").get<double>()));
    } else if (kind == "finite_range") {
      bool log_scale = dj.value("log", false);
      dims.emplace_back(name, Domain::finite_range(
                                  dj.at("values").get<std::vector<double>>(),
                                  log_scale));
    } else {
      throw std::invalid_argument("config space: unknown kind '" + kind + "'");
    }
  }
  return ConfigSpace(std::move(dims));
}

std::string ConfigSpace::to_json() const {
  json dims = json::array();
  for (const auto& [name, d] : dims_) {
    json dj;
    dj["name"] = name;
    switch (d.kind) {
      case DomainKind::kCategorical:
        dj["kind"] = "categorical";
        dj["values"] = d.labels;
        break;
      case DomainKind::kUniform:
        dj["kind"] = "uniform";
        dj["lo"] = d.lo;
        dj["hi"] = d.hi;
        break;
      case DomainKind::kLogUniform:
        dj["kind"] = "log_uniform";
        dj["lo"] = d.lo;
        dj["hi"] = d.hi;
        break;
      case DomainKind::kFiniteRange:
        dj["kind"] = "finite_range";
        dj["values"] = d.values;
        dj["log"] = d.log_scale;
        break;
    }
    dims.push_back(dj);
  }
  return json{{"dims", dims}}.dump();
}

Config ConfigSpace::sample(Rng& rng) const {
  Config c;
  c.values.reserve(dims_.size());
  for (const auto& [name, d] : dims_) {
    switch (d.kind) {
      case DomainKind::kCategorical:
        c.values.emplace_back(d.labels[rng.uniform_index(d.labels.size())]);
        break;
      case DomainKind::kUniform:
        c.values.emplace_back(rng.uniform(d.lo, d.hi));
        break;
      case DomainKind::kLogUniform:
        c.values.emplace_back(
            std::exp(rng.uniform(std::log(d.lo), std::log(d.hi))));
        break;
      case DomainKind::kFiniteRange:
        c.values.emplace_back(d.values[rng.uniform_index(d.values.size())]);
        break;
    }
  }
  return c;
}

namespace {

bool value_in_domain(const Domain& d, const ConfigValue& v) {
  switch (d.kind) {
    case DomainKind::kCategorical: {
      const auto* s = std::get_if<std::string>(&v);
      return s != nullptr &&
             std::find(d.labels.begin(), d.labels.end(), *s) != d.labels.end();
    }
    case DomainKind::kUniform:
    case DomainKind::kLogUniform: {
      const auto* x = std::get_if<double>(&v);
      return x != nullptr && *x >= d.lo && *x <= d.hi;
    }
    case DomainKind::kFiniteRange: {
      const auto* x = std::get_if<double>(&v);
      return x != nullptr &&
             std::find(d.values.begin(), d.values.end(), *x) != d.values.end();
    }
  }
  return false;
}

}  // namespace

bool ConfigSpace::contains(const Config& config) const {
  if (config.values.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!value_in_domain(dims_[i].second, config.values[i])) return false;
  }
  return true;
}

void ConfigSpace::validate(const Config& config) const {
  if (config.values.size() != dims_.size()) {
    throw std::invalid_argument("config: wrong number of values");
  }
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!value_in_domain(dims_[i].second, config.values[i])) {
      throw std::invalid_argument("config: value outside domain of '" +
                                  dims_[i].first + "'");
    }
  }
}

std::vector<double> ConfigSpace::encode(const Config& config) const {
  validate(config);
  std::vector<double> out;
  out.reserve(encoded_size_);
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const Domain& d = dims_[i].second;
    switch (d.kind) {
      case DomainKind::kCategorical: {
        const auto& label = std::get<std::string>(config.values[i]);
        for (const auto& l : d.labels) out.push_back(l == label ? 1.0 : 0.0);
        break;
      }
      case DomainKind::kUniform:
        out.push_back(std::get<double>(config.values[i]));
        break;
      case DomainKind::kLogUniform:
        out.push_back(std::log(std::get<double>(config.values[i])));
        break;
      case DomainKind::kFiniteRange: {
        double v = std::get<double>(config.values[i]);
        out.push_back(d.log_scale ? std::log(v) : v);
        break;
      }
    }
  }
  return out;
}

std::string ConfigSpace::value_to_string(std::size_t i, const ConfigValue& v) const {
  if (dims_[i].second.kind == DomainKind::kCategorical) {
    return std::get<std::string>(v);
  }
  return format_double(std::get<double>(v));
}

ConfigValue ConfigSpace::value_from_string(std::size_t i, std::string_view s) const {
  if (dims_[i].second.kind == DomainKind::kCategorical) {
    return ConfigValue(std::string(s));
  }
  return ConfigValue(parse_double(s));
}

std::string ConfigSpace::config_key(const Config& config) const {
  std::string key;
  for (std::size_t i = 0; i < config.values.size(); ++i) {
    if (i > 0) key += '\x1f';
    key += value_to_string(i, config.values[i]);
  }
  return key;
}

std::string ConfigSpace::config_to_json(const Config& config) const {
  validate(config);
  json j = json::object();
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].second.kind == DomainKind::kCategorical) {
      j[dims_[i].first] = std::get<std::string>(config.values[i]);
    } else {
      j[dims_[i].first] = std::get<double>(config.values[i]);
    }
  }
  return j.dump();
}

Config ConfigSpace::config_from_json(const std::string& json_text) const {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  Config c;
  for (const auto& [name, d] : dims_) {
    if (!j.contains(name)) {
      throw std::invalid_argument("config: missing dimension '" + name + "'");
    }
    if (d.kind == DomainKind::kCategorical) {
      c.values.emplace_back(j[name].get<std::string>());
    } else {
      c.values.emplace_back(j[name].get<double>());
    }
  }
  validate(c);
  return c;
}

}  // namespace cqr

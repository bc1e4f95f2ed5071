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
#include <cmath>
#include <map>

#include <doctest.h>

using namespace cqr;

TEST_CASE("domain construction validates bounds") {
  CHECK_THROWS_AS(Domain::uniform(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::uniform(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::log_uniform(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::log_uniform(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::categorical({}), std::invalid_argument);
  CHECK_THROWS_AS(Domain::categorical({"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(Domain::finite_range({3.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Domain::finite_range({-1.0, 2.0}, true), std::invalid_argument);
  CHECK_THROWS_AS(ConfigSpace({{"a", Domain::uniform(0, 1)},
                               {"a", Domain::uniform(0, 1)}}),
                  std::invalid_argument);
}

TEST_CASE("single-label categorical always samples that label") {
  ConfigSpace space({{"c", Domain::categorical({"a"})}});
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    CHECK(std::get<std::string>(space.sample(rng).values[0]) == "a");
  }
}

TEST_CASE("sampling is deterministic under the seed") {
  ConfigSpace space({{"x", Domain::uniform(0, 1)},
                     {"c", Domain::categorical({"a", "b", "c"})},
                     {"lr", Domain::log_uniform(1e-4, 1e-1)}});
  Rng rng1(42), rng2(42);
  for (int i = 0; i < 50; ++i) {
    Config a = space.sample(rng1);
    Config b = space.sample(rng2);
    CHECK(a == b);
    double x = std::get<double>(a.values[0]);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("log_uniform sampling has the log-uniform median") {
  ConfigSpace space({{"lr", Domain::log_uniform(1e-4, 1e-1)}});
  Rng rng(3);
  std::vector<double> draws;
  for (int i = 0; i < 100000; ++i) {
    draws.push_back(std::get<double>(space.sample(rng).values[0]));
  }
  std::nth_element(draws.begin(), draws.begin() + 50000, draws.end());
  double median = draws[50000];
  double expected = std::sqrt(1e-4 * 1e-1);  // geometric midpoint
  CHECK(median == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("encoding follows the declared transforms") {
  ConfigSpace space({{"c", Domain::categorical({"a", "b"})},
                     {"x", Domain::uniform(0, 1)},
                     {"lr", Domain::log_uniform(1e-4, 1e-1)},
                     {"bs", Domain::finite_range({8, 16, 32}, true)},
                     {"d", Domain::finite_range({0.0, 0.3, 0.6})}});
  Config config{{std::string("a"), 0.5, 1e-2, 16.0, 0.3}};
  auto v = space.encode(config);
  REQUIRE(v.size() == space.encoded_size());
  REQUIRE(v.size() == 6);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 0.0);
  CHECK(v[2] == 0.5);
  CHECK(v[3] == doctest::Approx(std::log(1e-2)));
  CHECK(v[4] == doctest::Approx(std::log(16.0)));
  CHECK(v[5] == 0.3);
}

TEST_CASE("encode of sampled configs has fixed length") {
  ConfigSpace space({{"c", Domain::categorical({"a", "b", "c"})},
                     {"x", Domain::uniform(-2, 3)},
                     {"bs", Domain::finite_range({1, 2, 4, 8})}});
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    CHECK(space.encode(space.sample(rng)).size() == space.encoded_size());
  }
}

TEST_CASE("categorical sampling is uniform (chi-square, p > 0.001)") {
  ConfigSpace space({{"c", Domain::categorical({"a", "b", "c", "d"})}});
  Rng rng(5);
  std::map<std::string, long> counts;
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    counts[std::get<std::string>(space.sample(rng).values[0])]++;
  }
  double expected = n / 4.0;
  double chi2 = 0.0;
  for (const auto& [label, count] : counts) {
    chi2 += (count - expected) * (count - expected) / expected;
  }
  CHECK(chi2 < 16.266);  // chi-square critical value, df = 3, p = 0.001
}

TEST_CASE("validate rejects out-of-domain values") {
  ConfigSpace space({{"c", Domain::categorical({"a", "b"})},
                     {"x", Domain::uniform(0, 1)}});
  CHECK_NOTHROW(space.validate(Config{{std::string("b"), 0.5}}));
  CHECK_THROWS_AS(space.validate(Config{{std::string("z"), 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(space.validate(Config{{std::string("a"), 1.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(space.validate(Config{{std::string("a")}}),
                  std::invalid_argument);
}

TEST_CASE("JSON declaration round-trips") {
  const std::string decl = R"({"dims": [
    {"name": "act", "kind": "categorical", "values": ["tanh", "relu"]},
    {"name": "wd", "kind": "uniform", "lo": 1e-5, "hi": 0.1},
    {"name": "lr", "kind": "log_uniform", "lo": 1e-4, "hi": 0.1},
    {"name": "bs", "kind": "finite_range", "values": [8, 16, 32, 64], "log": true}
  ]})";
  ConfigSpace space = ConfigSpace::from_json(decl);
  REQUIRE(space.num_dims() == 4);
  CHECK(space.name(0) == "act");
  CHECK(space.domain(3).log_scale);

  ConfigSpace again = ConfigSpace::from_json(space.to_json());
  Rng rng1(9), rng2(9);
  for (int i = 0; i < 20; ++i) CHECK(space.sample(rng1) == again.sample(rng2));

  CHECK_THROWS_AS(ConfigSpace::from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(ConfigSpace::from_json(R"({"dims": [{"name": "x"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ConfigSpace::from_json(R"({"dims": [{"name": "x", "kind": "what"}]})"),
      std::invalid_argument);
}

TEST_CASE("config JSON and string forms round-trip exactly") {
  ConfigSpace space({{"c", Domain::categorical({"a", "b"})},
                     {"x", Domain::uniform(0, 1)}});
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    Config config = space.sample(rng);
    CHECK(space.config_from_json(space.config_to_json(config)) == config);
    for (std::size_t d = 0; d < space.num_dims(); ++d) {
      CHECK(space.value_from_string(d, space.value_to_string(d, config.values[d])) ==
            config.values[d]);
    }
  }
}

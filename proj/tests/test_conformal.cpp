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
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "quantile_gbm.hpp"
#include "rng.hpp"

using namespace cqr;

TEST_CASE("conformity scores hand values") {
  std::vector<double> lo{1.0, 2.0, 0.0};
  std::vector<double> hi{3.0, 4.0, 1.0};
  std::vector<double> y{0.0, 5.0, 0.5};
  auto scores = conformity_scores(lo, hi, y);
  REQUIRE(scores.size() == 3);
  CHECK(scores[0] == 1.0);   // below the interval by 1
  CHECK(scores[1] == 1.0);   // above the interval by 1
  CHECK(scores[2] == -0.5);  // strictly inside: negative distance to endpoint

  // Exactly on an endpoint scores zero.
  std::vector<double> one_lo{1.0}, one_hi{3.0}, at_hi{3.0}, at_lo{1.0};
  CHECK(conformity_scores(one_lo, one_hi, at_hi)[0] == 0.0);
  CHECK(conformity_scores(one_lo, one_hi, at_lo)[0] == 0.0);

  std::vector<double> two{1.0, 2.0}, empty;
  CHECK_THROWS_AS(conformity_scores(one_lo, two, at_lo), std::invalid_argument);
  CHECK_THROWS_AS(conformity_scores(one_lo, one_hi, empty),
                  std::invalid_argument);
}

TEST_CASE("gamma correction picks the ceiling-convention quantile") {
  std::vector<double> scores{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};  // unsorted input
  // alpha = 0.2, n = 10: level = 0.6 * 1.1 = 0.66, ceil(6.6) = 7 -> 7.
  CHECK(gamma_correction(scores, 0.2, 10) == 7.0);
  // alpha = 0.4: level = 0.2 * 1.1 = 0.22, ceil(2.2) = 3 -> 3.
  CHECK(gamma_correction(scores, 0.4, 10) == 3.0);
  // Level >= 1 returns the maximum score.
  CHECK(gamma_correction(scores, 0.01, 10) == 10.0);
  // Single score: always that score.
  CHECK(gamma_correction({2.5}, 0.2, 1) == 2.5);
  CHECK_THROWS_AS(gamma_correction({}, 0.2, 0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_correction({1.0, 2.0}, 0.2, 3), std::invalid_argument);
}

TEST_CASE("conformalize widens or shrinks symmetrically") {
  auto widened = conformalize(1.0, 3.0, 0.5);
  CHECK(widened.first == 0.5);
  CHECK(widened.second == 3.5);
  auto shrunk = conformalize(1.0, 3.0, -0.4);
  CHECK(shrunk.first == doctest::Approx(1.4));
  CHECK(shrunk.second == doctest::Approx(2.6));
  // A strongly negative gamma may cross the endpoints: an empty interval.
  auto crossed = conformalize(1.0, 3.0, -2.0);
  CHECK(crossed.first > crossed.second);
}

TEST_CASE("split-conformal coverage lands in the finite-sample band") {
  // Constant-quantile "model" on iid normal data. For the pair at
  // alpha = 0.2, coverage of a fresh point lies in
  // [1 - 2*alpha, 1 - 2*alpha + 1/(n_val + 1)] in expectation.
  const double alpha = 0.2;
  const std::size_t n_train = 200, n_val = 99, n_test = 400;
  double covered = 0.0, total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed, 77);
    std::vector<double> train(n_train);
    for (auto& v : train) v = rng.normal();
    double q_lo = empirical_quantile(train, alpha);
    double q_hi = empirical_quantile(train, 1.0 - alpha);

    std::vector<double> val_y(n_val), lo(n_val, q_lo), hi(n_val, q_hi);
    for (auto& v : val_y) v = rng.normal();
    double gamma =
        gamma_correction(conformity_scores(lo, hi, val_y), alpha, n_val);
    auto [c_lo, c_hi] = conformalize(q_lo, q_hi, gamma);

    for (std::size_t i = 0; i < n_test; ++i) {
      double y = rng.normal();
      covered += (y >= c_lo && y <= c_hi) ? 1.0 : 0.0;
      total += 1.0;
    }
  }
  double coverage = covered / total;
  CHECK(coverage >= 1.0 - 2 * alpha - 0.02);
  CHECK(coverage <= 1.0 - 2 * alpha + 1.0 / (n_val + 1) + 0.02);
}

TEST_CASE("gamma grows with harder validation sets") {
  // Pushing every validation point outside the interval forces gamma to the
  // validation-set maximum distance.
  std::vector<double> lo(20, 0.0), hi(20, 1.0), y(20);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 + static_cast<double>(i);
  auto scores = conformity_scores(lo, hi, y);
  double gamma = gamma_correction(scores, 0.2, y.size());
  // level = 0.6 * 1.05 = 0.63, ceil(12.6) = 13 -> score 13 - 1 + 1 = 13.
  CHECK(gamma == 13.0);
}

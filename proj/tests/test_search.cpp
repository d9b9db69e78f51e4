// Copyright 2026 The mergelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <mutex>
#include <vector>

#include "doctest.h"
#include "mergelab/measure.hpp"
#include "mergelab/search.hpp"
#include "mergelab/states.hpp"

using namespace mergelab;

TEST_CASE("control instance reaches a perfect decoder immediately") {
  SearchConfig cfg;
  cfg.restarts = 2;
  cfg.iterations = 30;
  cfg.maxKraus = 11;
  cfg.threads = 1;
  const SearchReport rep = optimize_one_way_zero_cost(trivial_instance(), cfg);
  CHECK(rep.bestFidelitySq >= 1.0 - 1e-6);
  CHECK(rep.gapEstimate <= 1e-6);
}

TEST_CASE("objective ascent is monotone within the backtracking guarantee") {
  SearchConfig cfg;
  cfg.restarts = 2;
  cfg.iterations = 40;
  cfg.seed = 5;
  cfg.threads = 1;
  std::mutex mu;
  std::map<int, std::vector<double>> traces;
  cfg.onIteration = [&](int restart, int, double value) {
    std::lock_guard<std::mutex> lock(mu);
    traces[restart].push_back(value);
  };
  const SearchReport rep = optimize_one_way_zero_cost(build_instance(default_gammas()), cfg);
  REQUIRE(traces.size() == 2);
  for (const auto& [restart, seq] : traces) {
    for (std::size_t i = 1; i < seq.size(); ++i) {
      CHECK(seq[i] >= seq[i - 1] - 1e-9);
    }
    CHECK(seq.back() <= 1.0 + 1e-12);
  }
  CHECK(rep.bestFidelitySq > 0.9);  // even a short run climbs high
}

TEST_CASE("fixed seed reproduces the search bit for bit") {
  const MergeInstance inst = build_instance(default_gammas());
  SearchConfig cfg;
  cfg.restarts = 2;
  cfg.iterations = 25;
  cfg.seed = 12345;
  cfg.threads = 1;
  const SearchReport a = optimize_one_way_zero_cost(inst, cfg);
  const SearchReport b = optimize_one_way_zero_cost(inst, cfg);
  CHECK(a.bestFidelitySq == b.bestFidelitySq);
  CHECK(a.bestRestart == b.bestRestart);
  REQUIRE(a.perRestart.size() == b.perRestart.size());
  for (std::size_t i = 0; i < a.perRestart.size(); ++i) {
    CHECK(a.perRestart[i].best == b.perRestart[i].best);
    CHECK(a.perRestart[i].seed == b.perRestart[i].seed);
    CHECK(a.perRestart[i].iterations == b.perRestart[i].iterations);
  }
  REQUIRE(a.bestKraus.mat.size() == b.bestKraus.mat.size());
  for (std::size_t i = 0; i < a.bestKraus.mat.size(); ++i) {
    CHECK(a.bestKraus.mat[i] == b.bestKraus.mat[i]);
  }
}

TEST_CASE("restart outcomes do not depend on the thread count") {
  const MergeInstance inst = build_instance(default_gammas());
  SearchConfig cfg;
  cfg.restarts = 4;
  cfg.iterations = 20;
  cfg.seed = 777;
  cfg.threads = 1;
  const SearchReport one = optimize_one_way_zero_cost(inst, cfg);
  cfg.threads = 3;
  const SearchReport three = optimize_one_way_zero_cost(inst, cfg);
  REQUIRE(one.perRestart.size() == three.perRestart.size());
  for (std::size_t i = 0; i < one.perRestart.size(); ++i) {
    CHECK(one.perRestart[i].best ==
          doctest::Approx(three.perRestart[i].best).epsilon(1e-12));
  }
  CHECK(one.bestFidelitySq == doctest::Approx(three.bestFidelitySq).epsilon(1e-6));
  CHECK(one.bestRestart == three.bestRestart);
}

TEST_CASE("the fixed zero-cost measurement is a strictly lossy decoder") {
  // Stacking one conditioned family into a single measurement (block
  // outcome ignored) cannot decode: the objective stays visibly below 1.
  const KrausFamily fam = build_a_measurement(0, default_gammas());
  LinearMap m = LinearMap::zero({11}, {33});
  for (int k = 0; k < 33; ++k) {
    for (int c = 0; c < 11; ++c) {
      m.mat[static_cast<std::size_t>(k) * 11 + c] = fam.operators[k].at(0, c);
    }
  }
  const double j = decoder_objective(build_instance(default_gammas()), m);
  CHECK(j < 1.0 - 1e-3);
  CHECK(j > 0.0);
}

TEST_CASE("elimination family admits no near-perfect zero-cost decoder") {
  SearchConfig cfg;
  cfg.restarts = 8;
  cfg.iterations = 150;
  cfg.maxKraus = 4;
  cfg.seed = 3;
  cfg.threads = 1;
  const SearchReport rep = optimize_one_way_zero_cost(elimination_instance(), cfg);
  CHECK(rep.bestFidelitySq < 1.0 - 1e-3);
  CHECK(rep.gapEstimate > 1e-3);
}

TEST_CASE("configuration is validated") {
  SearchConfig cfg;
  cfg.maxKraus = 5;  // below dim(A) = 11
  CHECK_THROWS_AS(optimize_one_way_zero_cost(build_instance(default_gammas()), cfg),
                  std::invalid_argument);
  cfg = SearchConfig{};
  cfg.restarts = 0;
  CHECK_THROWS_AS(optimize_one_way_zero_cost(build_instance(default_gammas()), cfg),
                  std::invalid_argument);
}

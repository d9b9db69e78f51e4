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
#include <cmath>
#include <random>
#include <set>
#include <variant>

#include "doctest.h"
#include "mergelab/correction.hpp"
#include "mergelab/linalg.hpp"
#include "mergelab/measure.hpp"
#include "mergelab/protocols.hpp"
#include "mergelab/states.hpp"

using namespace mergelab;

namespace {

std::vector<cx> random_alpha(std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  std::vector<cx> a(3);
  for (auto& z : a) z = cx(dist(rng), dist(rng));
  return a;
}

// Measurement prefix of the zero-cost protocol: block outcome announced to
// A, then A's conditioned measurement; no corrections yet.
Protocol two_way_prefix(const GammaParams& g) {
  Protocol p;
  p.name = "prefix";
  MeasureNode b{Party::B, {}, {}};
  b.families[{}] = build_b_measurement();
  p.steps.push_back(std::move(b));
  p.steps.push_back(MessageNode{Party::B, Party::A});
  MeasureNode a{Party::A, {}, {}};
  for (int j = 0; j < 3; ++j) a.families[{j}] = build_a_measurement(j, g);
  p.steps.push_back(std::move(a));
  return p;
}

}  // namespace

TEST_CASE("two-way run: 99 exact branches at zero cost") {
  const GammaParams g = default_gammas();
  const MergeInstance inst = build_instance(g);
  const Protocol p = build_two_way(g);
  CHECK(classify(p) == Direction::TwoWay);

  int lastMeasure = -1;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (std::holds_alternative<MeasureNode>(p.steps[i])) lastMeasure = static_cast<int>(i);
  }
  double redDev = 0.0;
  double schmidtDev = 0.0;
  auto hook = [&](const StepEvent& ev) {
    if (ev.step != lastMeasure) return;
    const DensityOperator r = reduce(ev.state, {"R"});
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const cx want = (i == j) ? cx(1.0 / 3.0, 0) : cx(0, 0);
        redDev = std::max(redDev, std::abs(r.mat()[i * 3 + j] - want));
      }
    }
    // Equivalent statement: every branch is maximally entangled, rank 3.
    const SchmidtResult sr = schmidt(ev.state, {"R"});
    schmidtDev = std::max(schmidtDev, std::abs(double(sr.rank()) - 3.0));
    for (double c : sr.coeffs) {
      schmidtDev = std::max(schmidtDev, std::abs(c - 1.0 / std::sqrt(3.0)));
    }
  };

  const RunReport rep = run_merge(p, inst, hook);
  CHECK(rep.branches.size() == 99);
  CHECK(rep.costBits == 0.0);
  CHECK(rep.direction == Direction::TwoWay);
  CHECK(std::abs(rep.totalProb - 1.0) < 1e-9);
  CHECK(std::abs(rep.minFidelitySq - 1.0) < 1e-9);
  CHECK(std::abs(rep.avgFidelitySq - 1.0) < 1e-9);
  CHECK(rep.epsilonAchieved < 1e-4);
  CHECK(redDev < 1e-9);
  CHECK(schmidtDev < 1e-9);
  for (const auto& b : rep.branches) {
    CHECK(b.transcript.size() == 2);
    CHECK(b.finalState.labels() == Labels{"R", "Bp", "B"});
  }
}

TEST_CASE("one-way run: 24 exact branches for one shared pair") {
  const GammaParams g = default_gammas();
  const MergeInstance inst = build_instance(g);
  const Protocol p = build_one_way(g);
  CHECK(p.resourceK == 2);
  CHECK(classify(p) == Direction::OneWayAB);

  const RunReport rep = run_merge(p, inst);
  CHECK(rep.branches.size() == 24);
  CHECK(rep.costBits == 1.0);
  CHECK(std::abs(rep.totalProb - 1.0) < 1e-9);
  CHECK(std::abs(rep.minFidelitySq - 1.0) < 1e-9);
  for (const auto& b : rep.branches) {
    CHECK(b.finalState.labels() == Labels{"R", "Bp", "B"});
  }

  // Branch probabilities come in exactly two sizes: 16 teleport branches of
  // 1/22 and 8 flagged ones of 3/88.
  int small = 0, large = 0;
  for (const auto& b : rep.branches) {
    if (std::abs(b.probability - 1.0 / 22.0) < 1e-12) {
      ++small;
    } else if (std::abs(b.probability - 3.0 / 88.0) < 1e-12) {
      ++large;
    }
  }
  CHECK(small == 16);
  CHECK(large == 8);
}

TEST_CASE("superposition decode is exact for both protocols") {
  const GammaParams g = default_gammas();
  const MergeInstance inst = build_instance(g);
  const Protocol twoWay = build_two_way(g);
  const Protocol oneWay = build_one_way(g);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto alpha = random_alpha(rng);
    CHECK(std::abs(decode_superposition(twoWay, inst, alpha).minFidelitySq - 1.0) < 1e-9);
    CHECK(std::abs(decode_superposition(oneWay, inst, alpha).minFidelitySq - 1.0) < 1e-9);
  }
}

TEST_CASE("family members are identified with certainty") {
  const GammaParams g = default_gammas();
  const MergeInstance inst = build_instance(g);
  const Protocol twoWay = build_two_way(g);
  const Protocol oneWay = build_one_way(g);
  for (int l = 0; l < 3; ++l) {
    const auto d2 = discriminate(twoWay, inst, l);
    CHECK(d2.outcome == l);
    CHECK(std::abs(d2.probability - 1.0) < 1e-9);
    const auto d1 = discriminate(oneWay, inst, l);
    CHECK(d1.outcome == l);
    CHECK(std::abs(d1.probability - 1.0) < 1e-9);
  }
}

TEST_CASE("elimination control: perfect guessing, broken superpositions") {
  const MergeInstance inst = elimination_instance();
  const Protocol p = build_elimination_protocol();
  CHECK(p.resourceK == 1);
  CHECK(classify(p) == Direction::OneWayAB);

  for (int l = 0; l < 3; ++l) {
    const auto d = discriminate(p, inst, l);
    CHECK(d.outcome == l);
    CHECK(std::abs(d.probability - 1.0) < 1e-9);
  }

  const std::vector<cx> uniform{cx(1, 0), cx(1, 0), cx(1, 0)};
  const RunReport rep = decode_superposition(p, inst, uniform);
  REQUIRE(rep.branches.size() == 2);
  CHECK(rep.minFidelitySq == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(rep.avgFidelitySq == doctest::Approx(5.0 / 9.0).epsilon(1e-9));
  std::multiset<int> thirds;
  for (const auto& b : rep.branches) {
    thirds.insert(static_cast<int>(std::lround(b.fidelitySq * 3.0)));
  }
  CHECK(thirds == std::multiset<int>{1, 2});
}

TEST_CASE("grading pads missing targets and traces leftovers") {
  const MergeInstance inst = elimination_instance();
  // A protocol with no steps leaves psi on (R, A, B); the merged target
  // lives on (R, Bp, B). Independent oracle: pad Bp with |0>, trace A by
  // summing the squared overlaps against <a|_A target.
  const Protocol idle{"idle", 1, {}};
  const RunReport rep = run_merge(idle, inst);
  REQUIRE(rep.branches.size() == 1);

  const PureState target = merge_target(inst);
  double want = 0.0;
  for (int a = 0; a < 2; ++a) {
    cx ip{};
    for (int l = 0; l < 3; ++l) {
      for (int b = 0; b < 2; ++b) {
        // <target[l, Bp=0, b]> x psi[l, A=a, b]
        ip += std::conj(target.amps()[(l * 2 + 0) * 2 + b]) *
              inst.psi.amps()[(l * 2 + a) * 2 + b];
      }
    }
    want += std::norm(ip);
  }
  CHECK(rep.minFidelitySq == doctest::Approx(want).epsilon(1e-12));
  CHECK(rep.minFidelitySq < 0.9);  // far from a merge
}

TEST_CASE("conditioned steps require the outcome to be known locally") {
  const GammaParams g = default_gammas();
  const MergeInstance inst = build_instance(g);
  // Same steps as the real protocol but without the message: A cannot
  // select a family keyed on B's outcome.
  Protocol p;
  p.name = "no-message";
  MeasureNode b{Party::B, {}, {}};
  b.families[{}] = build_b_measurement();
  p.steps.push_back(std::move(b));
  MeasureNode a{Party::A, {}, {}};
  for (int j = 0; j < 3; ++j) a.families[{j}] = build_a_measurement(j, g);
  p.steps.push_back(std::move(a));
  CHECK_THROWS_AS(run_merge(p, inst), std::runtime_error);

  // With a {} fallback the same protocol runs unconditioned.
  Protocol q;
  q.name = "fallback";
  MeasureNode b2{Party::B, {}, {}};
  b2.families[{}] = build_b_measurement();
  q.steps.push_back(std::move(b2));
  MeasureNode a2{Party::A, {}, {}};
  a2.families[{}] = build_a_measurement(0, g);
  q.steps.push_back(std::move(a2));
  const RunReport rep = run_merge(q, inst);
  CHECK(rep.branches.size() == 99);
  CHECK(std::abs(rep.totalProb - 1.0) < 1e-9);
}

TEST_CASE("norm-changing corrections are rejected") {
  const MergeInstance inst = elimination_instance();
  Protocol p;
  p.name = "shrink";
  CorrectNode c{Party::B, {"B"}, {"B"}, {}};
  LinearMap half = LinearMap::identity(2);
  for (auto& z : half.mat) z *= 0.5;
  c.isometries[{}] = std::move(half);
  p.steps.push_back(std::move(c));
  CHECK_THROWS_AS(run_merge(p, inst), std::runtime_error);
}

TEST_CASE("branch corrections are completion-order independent") {
  const GammaParams g = default_gammas();
  const MergeInstance inst = build_instance(g);
  const PureState target = merge_target(inst);
  CompletionOptions shuffled;
  shuffled.domainOrder = {10, 3, 7, 0, 5, 8, 1, 9, 2, 6, 4};
  for (int d = 120; d >= 0; --d) shuffled.codomainOrder.push_back(d);

  int solved = 0;
  auto hook = [&](const StepEvent& ev) {
    if (ev.step != 2 || !(ev.transcript[1] == 0 || ev.transcript[1] == 24)) return;
    const auto res = solve_exact_correction(ev.state, target, "R", shuffled);
    REQUIRE(res.has_value());
    Dims dims;
    Labels labels;
    CVec raw = apply_to_labels_raw(ev.state, res->isometry, {"B"}, &dims, &labels,
                                   {"Bp", "B"});
    const PureState fixed = PureState::normalized(std::move(raw), std::move(dims),
                                                  std::move(labels));
    CHECK(fidelity_sq(fixed, target) == doctest::Approx(1.0).epsilon(1e-9));
    ++solved;
  };
  simulate(two_way_prefix(g), inst.psi, target, hook);
  CHECK(solved == 6);
}

TEST_CASE("resource attachment and direction classification") {
  const MergeInstance inst = build_instance(default_gammas());
  const PureState with = attach_resource(inst.psi, 2);
  CHECK(with.has_label("Abar"));
  CHECK(with.has_label("Bbar"));
  CHECK(with.total_dim() == 3 * 11 * 11 * 4);
  const PureState without = attach_resource(inst.psi, 1);
  CHECK(without.total_dim() == inst.psi.total_dim());

  Protocol ba{"ba", 1, {}};
  ba.steps.push_back(MessageNode{Party::B, Party::A});
  CHECK(classify(ba) == Direction::OneWayBA);
  Protocol silent{"silent", 1, {}};
  CHECK(classify(silent) == Direction::OneWayAB);
}

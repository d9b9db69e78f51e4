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

#include "doctest.h"
#include "mergelab/koashi_imoto.hpp"
#include "mergelab/linalg.hpp"
#include "mergelab/states.hpp"

using namespace mergelab;

TEST_CASE("block structure: one entangled-pair block plus three uniform blocks") {
  const KIDecomposition ki = build_ki(default_gammas());
  CHECK(ki.flagDim == 4);
  REQUIRE(ki.blocks.size() == 4);
  CHECK(ki.blocks[0].prob == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
  for (int j = 1; j < 4; ++j) {
    CHECK(ki.blocks[j].prob == doctest::Approx(3.0 / 11.0).epsilon(1e-14));
  }
  double total = 0.0;
  for (const auto& b : ki.blocks) total += b.prob;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(ki.blocks[0].phi.dims() == Dims{3, 2, 2});
  for (int j = 1; j < 4; ++j) CHECK(ki.blocks[j].phi.dims() == Dims{3, 3, 3});
  for (const auto& b : ki.blocks) {
    CHECK(b.omega.total_dim() == 1);  // no redundant side information
  }
}

TEST_CASE("embeds are isometries and the reconstruction residual vanishes") {
  const GammaParams g = default_gammas();
  const KIDecomposition ki = build_ki(g);
  CHECK(isometry_defect(ki.embedA) < 1e-12);
  CHECK(isometry_defect(ki.embedB) < 1e-12);

  const MergeInstance inst = build_instance(g);
  const KIVerification v = verify_ki(inst.psi, ki, 1e-10);
  CHECK(v.ok);
  CHECK(v.residual < 1e-12);
  CHECK(v.embedDefectA < 1e-12);
  CHECK(v.embedDefectB < 1e-12);
  CHECK(v.probSum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verification fails against the wrong instance") {
  const KIDecomposition ki = build_ki(default_gammas());
  GammaParams other = default_gammas();
  other.gamma1 = std::polar(1.0, 2.1);
  const MergeInstance inst = build_instance(other);
  const KIVerification v = verify_ki(inst.psi, ki, 1e-10);
  CHECK(!v.ok);
  CHECK(v.residual > 1e-3);
}

TEST_CASE("every block state keeps the reference maximally mixed") {
  const KIDecomposition ki = build_ki(default_gammas());
  for (const auto& b : ki.blocks) {
    const DensityOperator r = reduce(b.phi, {"R"});
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const cx want = (i == j) ? cx(1.0 / 3.0, 0) : cx(0, 0);
        CHECK(std::abs(r.mat()[i * 3 + j] - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("frozen amplitudes of the entangled-pair block") {
  const GammaParams g = default_gammas();
  const KIDecomposition ki = build_ki(g);
  const PureState& phi0 = ki.blocks[0].phi;
  const double s = 1.0 / std::sqrt(6.0);
  auto at = [&](int l, int x, int y) { return phi0.amps()[(l * 2 + x) * 2 + y]; };
  CHECK(std::abs(at(0, 0, 0) - cx(s, 0)) < 1e-12);
  CHECK(std::abs(at(0, 1, 1) - cx(s, 0)) < 1e-12);
  CHECK(std::abs(at(1, 1, 0) - g.gamma1 * s) < 1e-12);
  CHECK(std::abs(at(1, 0, 1) - g.gamma1 * s) < 1e-12);
  CHECK(std::abs(at(2, 0, 0) - g.gamma2 * s) < 1e-12);
  CHECK(std::abs(at(2, 1, 1) + g.gamma2 * s) < 1e-12);
  CHECK(std::abs(at(0, 0, 1)) == 0.0);
}

TEST_CASE("uniform blocks carry the cyclic correlation pattern") {
  const KIDecomposition ki = build_ki(default_gammas());
  const PureState& phi1 = ki.blocks[1].phi;
  const double c = 1.0 / 3.0;
  auto at = [&](int l, int x, int y) { return phi1.amps()[(l * 3 + x) * 3 + y]; };
  for (int l = 0; l < 3; ++l) {
    for (int m = 0; m < 3; ++m) {
      CHECK(std::abs(at(l, (l + m) % 3, m) - cx(c, 0)) < 1e-12);
    }
  }
  CHECK(std::abs(at(0, 1, 0)) == 0.0);
}

TEST_CASE("invalid gammas are rejected") {
  GammaParams g = default_gammas();
  g.gamma2 = cx(1, 0);
  CHECK_THROWS_AS(build_ki(g), std::invalid_argument);
}

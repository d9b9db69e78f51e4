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

#include "doctest.h"
#include "mergelab/kernels.hpp"
#include "mergelab/linalg.hpp"
#include "mergelab/states.hpp"

using namespace mergelab;

namespace {

PureState random_state(std::mt19937_64& rng, Dims dims, Labels labels) {
  std::normal_distribution<double> dist;
  int total = 1;
  for (int d : dims) total *= d;
  CVec v(total);
  for (auto& z : v) z = cx(dist(rng), dist(rng));
  return PureState::normalized(std::move(v), std::move(dims), std::move(labels));
}

}  // namespace

TEST_CASE("pauli action on a maximally entangled pair, frozen values") {
  // (X (x) Z) (|00> + |11>)/sqrt2 = (|10> - |01>)/sqrt2.
  const PureState phi2 = phi_K(2);
  const LinearMap xz = tensor(pauli_x(2), pauli_z(2));
  Dims dims;
  Labels labels;
  CVec out = apply_to_labels_raw(phi2, xz, {"A", "B"}, &dims, &labels, {"A", "B"});
  const double s = 1.0 / std::sqrt(2.0);
  REQUIRE(out.size() == 4);
  CHECK(std::abs(out[0] - cx(0, 0)) < 1e-15);
  CHECK(std::abs(out[1] - cx(-s, 0)) < 1e-15);
  CHECK(std::abs(out[2] - cx(s, 0)) < 1e-15);
  CHECK(std::abs(out[3] - cx(0, 0)) < 1e-15);
}

TEST_CASE("reduce of a product state returns the factor") {
  std::mt19937_64 rng(11);
  const PureState a = random_state(rng, {4}, {"a"});
  const PureState b = random_state(rng, {3}, {"b"});
  const PureState ab = tensor(a, b);
  const DensityOperator ra = reduce(ab, {"a"});
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const cx want = a.amps()[i] * std::conj(a.amps()[j]);
      CHECK(std::abs(ra.mat()[i * 4 + j] - want) < 1e-12);
    }
  }
  // Tracing everything but one side of an entangled pair gives I/2.
  const DensityOperator half = reduce(phi_K(2), {"B"});
  CHECK(std::abs(half.mat()[0] - cx(0.5, 0)) < 1e-12);
  CHECK(std::abs(half.mat()[3] - cx(0.5, 0)) < 1e-12);
  CHECK(std::abs(half.mat()[1]) < 1e-12);
}

TEST_CASE("schmidt decomposition reconstructs random states") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int da = 2 + static_cast<int>(rng() % 4);
    const int db = 2 + static_cast<int>(rng() % 4);
    const PureState psi = random_state(rng, {da, db}, {"L", "Rr"});
    const SchmidtResult sr = schmidt(psi, {"L"});
    double p = 0.0;
    for (double c : sr.coeffs) p += c * c;
    CHECK(p == doctest::Approx(1.0).epsilon(1e-10));
    // sum_i c_i |l_i>|r_i> must reproduce psi entrywise.
    for (int i = 0; i < da; ++i) {
      for (int j = 0; j < db; ++j) {
        cx got{};
        for (int r = 0; r < sr.rank(); ++r) {
          got += sr.coeffs[r] * sr.left[r][i] * sr.right[r][j];
        }
        CHECK(std::abs(got - psi.amps()[i * db + j]) < 1e-10);
      }
    }
    // Orthonormality of the left vectors.
    for (int r = 0; r < sr.rank(); ++r) {
      for (int q = 0; q < sr.rank(); ++q) {
        const cx g = kern::dotc(sr.left[r].data(), sr.left[q].data(), sr.left[r].size());
        CHECK(std::abs(g - (r == q ? cx(1, 0) : cx(0, 0))) < 1e-10);
      }
    }
  }
}

TEST_CASE("fidelity is symmetric, phase blind and label-order blind") {
  std::mt19937_64 rng(5);
  const PureState a = random_state(rng, {3, 4}, {"x", "y"});
  const PureState b = random_state(rng, {3, 4}, {"x", "y"});
  CHECK(fidelity_sq(a, b) == doctest::Approx(fidelity_sq(b, a)).epsilon(1e-12));

  CVec phased = a.amps();
  kern::scal(std::polar(1.0, 0.83), phased.data(), phased.size());
  const PureState ap(std::move(phased), a.dims(), a.labels());
  CHECK(fidelity_sq(ap, b) == doctest::Approx(fidelity_sq(a, b)).epsilon(1e-12));

  const PureState bswap = permuted(b, {"y", "x"});
  CHECK(fidelity_sq(a, bswap) == doctest::Approx(fidelity_sq(a, b)).epsilon(1e-12));
  CHECK(fidelity_sq(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropies of standard states") {
  CHECK(entropy_bits(reduce(phi_K(2), {"A"})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy_bits(reduce(phi_K(9), {"B"})) ==
        doctest::Approx(std::log2(9.0)).epsilon(1e-12));
  std::mt19937_64 rng(3);
  const PureState pure = random_state(rng, {5}, {"z"});
  CHECK(entropy_bits(reduce(tensor(pure, phi_K(2)), {"z"})) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("direct_sum_embed places fragments on coordinates 0..1 and 2..10") {
  CVec v2{cx(1, 0), cx(2, 0)};
  CVec v9(9, cx{});
  v9[4] = cx(0, 3);
  CVec full = direct_sum_embed(v2, v9);
  REQUIRE(full.size() == 11);
  CHECK(full[0] == cx(1, 0));
  CHECK(full[1] == cx(2, 0));
  CHECK(full[6] == cx(0, 3));
  for (int i : {2, 3, 4, 5, 7, 8, 9, 10}) CHECK(std::abs(full[i]) == 0.0);
}

TEST_CASE("compose and dagger satisfy the isometry algebra") {
  std::mt19937_64 rng(17);
  // Random isometry C^2 -> C^5 from two orthonormalized Gaussian columns.
  std::normal_distribution<double> dist;
  CVec c0(5), c1(5);
  for (auto& z : c0) z = cx(dist(rng), dist(rng));
  for (auto& z : c1) z = cx(dist(rng), dist(rng));
  cx ip = kern::dotc(c0.data(), c1.data(), 5);
  double n0 = std::sqrt(kern::nrm2sq(c0.data(), 5));
  for (auto& z : c0) z /= n0;
  ip = kern::dotc(c0.data(), c1.data(), 5);
  kern::axpy(-ip, c0.data(), c1.data(), 5);
  double n1 = std::sqrt(kern::nrm2sq(c1.data(), 5));
  for (auto& z : c1) z /= n1;
  LinearMap v = LinearMap::zero({2}, {5});
  for (int r = 0; r < 5; ++r) {
    v.mat[r * 2 + 0] = c0[r];
    v.mat[r * 2 + 1] = c1[r];
  }
  CHECK(isometry_defect(v) < 1e-12);
  const LinearMap vdv = compose(dagger(v), v);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(vdv.at(i, j) - (i == j ? cx(1, 0) : cx(0, 0))) < 1e-12);
    }
  }
}

TEST_CASE("squeezed drops trivial factors and keeps amplitudes") {
  PureState s(CVec{cx(1, 0)}, Dims{1}, Labels{"only"});
  const PureState t = tensor(phi_K(2), s);
  const PureState q = squeezed(t);
  CHECK(q.labels() == Labels{"A", "B"});
  CHECK(q.dims() == Dims{2, 2});
  for (int i = 0; i < 4; ++i) CHECK(std::abs(q.amps()[i] - phi_K(2).amps()[i]) < 1e-15);
}

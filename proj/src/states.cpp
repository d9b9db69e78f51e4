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

#include "mergelab/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mergelab/kernels.hpp"

namespace mergelab {

namespace {

// Isometries C^2 -> C^11 (coords 0..1) and C^9 -> C^11 (coords 2..10).
LinearMap embed2() {
  CVec m(11 * 2, cx{0.0, 0.0});
  m[0 * 2 + 0] = cx{1.0, 0.0};
  m[1 * 2 + 1] = cx{1.0, 0.0};
  return LinearMap(std::move(m), {2}, {11});
}

LinearMap embed9() {
  CVec m(11 * 9, cx{0.0, 0.0});
  for (int i = 0; i < 9; ++i) m[static_cast<std::size_t>(2 + i) * 9 + i] = cx{1.0, 0.0};
  return LinearMap(std::move(m), {9}, {11});
}

LinearMap pauli_power(const LinearMap& p, int n) {
  LinearMap acc = LinearMap::identity(p.domain_dim());
  for (int i = 0; i < n; ++i) acc = compose(p, acc);
  return acc;
}

LinearMap scaled(const LinearMap& m, cx a) {
  LinearMap out = m;
  kern::scal(a, out.mat.data(), out.mat.size());
  return out;
}

// Block contribution sqrt(w) * (embed*op (x) embed) |Phi_k>, as raw amplitudes
// on 11 x 11.
CVec block_part(double w, const LinearMap& op, const LinearMap& embed, int k) {
  const PureState phi = phi_K(k);
  const LinearMap aSide = compose(embed, op);
  Dims dims;
  Labels labels;
  CVec tmp = apply_to_labels_raw(phi, aSide, {"A"}, &dims, &labels, {"A"});
  PureState mid(std::move(tmp), std::move(dims), std::move(labels));  // still unit norm
  CVec out = apply_to_labels_raw(mid, embed, {"B"}, &dims, &labels, {"B"});
  // Result labels come out as (A, B) since apply moves acted factors last;
  // first call leaves (B, A), second (A, B).
  if (labels != Labels{"A", "B"}) throw std::logic_error("block_part: unexpected label order");
  kern::scal(cx{std::sqrt(w), 0.0}, out.data(), out.size());
  return out;
}

}  // namespace

GammaParams default_gammas() {
  const double c = std::sqrt(0.5);
  return {cx{c, c}, cx{c, c}};
}

std::vector<std::string> validate_gammas(const GammaParams& g) {
  std::vector<std::string> v;
  if (std::abs(std::abs(g.gamma1) - 1.0) > TOL_NORM) v.push_back("gamma1 must have unit modulus");
  if (std::abs(std::abs(g.gamma2) - 1.0) > TOL_NORM) v.push_back("gamma2 must have unit modulus");
  if (std::abs(g.gamma1.imag()) <= TOL_NORM) v.push_back("gamma1 must be nonreal");
  if (std::abs(g.gamma2.imag()) <= TOL_NORM) v.push_back("gamma2 must be nonreal");
  const cx iSq = cx{0.0, 1.0} * g.gamma1 * g.gamma1;
  if (std::abs(g.gamma2 - iSq) <= TOL_NORM || std::abs(g.gamma2 + iSq) <= TOL_NORM)
    v.push_back("gamma2 must differ from +-i*gamma1^2");
  return v;
}

LinearMap pauli_x(int k) {
  if (k < 1) throw std::invalid_argument("pauli_x: dimension must be positive");
  CVec m(static_cast<std::size_t>(k) * k, cx{0.0, 0.0});
  for (int l = 0; l < k; ++l) m[static_cast<std::size_t>((l + 1) % k) * k + l] = cx{1.0, 0.0};
  return LinearMap(std::move(m), {k}, {k});
}

LinearMap pauli_z(int k) {
  if (k < 1) throw std::invalid_argument("pauli_z: dimension must be positive");
  CVec m(static_cast<std::size_t>(k) * k, cx{0.0, 0.0});
  for (int l = 0; l < k; ++l) {
    const double theta = 2.0 * std::numbers::pi * l / k;
    m[static_cast<std::size_t>(l) * k + l] = cx{std::cos(theta), std::sin(theta)};
  }
  return LinearMap(std::move(m), {k}, {k});
}

PureState phi_K(int K) {
  if (K < 1) throw std::invalid_argument("phi_K: K must be positive");
  CVec amps(static_cast<std::size_t>(K) * K, cx{0.0, 0.0});
  const double c = 1.0 / std::sqrt(static_cast<double>(K));
  for (int l = 0; l < K; ++l) amps[static_cast<std::size_t>(l) * K + l] = cx{c, 0.0};
  return PureState(std::move(amps), {K, K}, {"A", "B"});
}

std::array<PureState, 3> build_family(const GammaParams& g) {
  const auto violations = validate_gammas(g);
  if (!violations.empty()) throw std::invalid_argument("invalid gammas: " + violations[0]);

  const LinearMap e2 = embed2();
  const LinearMap e9 = embed9();
  const LinearMap x2 = pauli_x(2);
  const LinearMap z2 = pauli_z(2);
  const LinearMap x9_3 = pauli_power(pauli_x(9), 3);
  const LinearMap x9_6 = pauli_power(pauli_x(9), 6);

  const double w2 = 2.0 / 11.0;
  const double w9 = 9.0 / 11.0;

  auto member = [&](const LinearMap& op2, const LinearMap& op9) {
    CVec amps = block_part(w2, op2, e2, 2);
    const CVec nine = block_part(w9, op9, e9, 9);
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += nine[i];
    return PureState(std::move(amps), {11, 11}, {"A", "B"});
  };

  return {member(LinearMap::identity(2), LinearMap::identity(9)),
          member(scaled(x2, g.gamma1), x9_3),
          member(scaled(z2, g.gamma2), x9_6)};
}

MergeInstance build_instance(const GammaParams& g) {
  auto family = build_family(g);
  CVec amps(static_cast<std::size_t>(3) * 11 * 11, cx{0.0, 0.0});
  const double c = 1.0 / std::sqrt(3.0);
  for (int l = 0; l < 3; ++l)
    kern::axpy(cx{c, 0.0}, family[l].amps().data(), amps.data() + static_cast<std::size_t>(l) * 121,
               121);
  PureState psi(std::move(amps), {3, 11, 11}, {"R", "A", "B"});
  return MergeInstance{std::move(psi),
                       {family[0], family[1], family[2]},
                       g,
                       3};
}

MergeInstance trivial_instance() {
  std::vector<PureState> family;
  for (int l = 0; l < 3; ++l) {
    CVec amps(121, cx{0.0, 0.0});
    amps[l] = cx{1.0, 0.0};  // |0>^A (x) |l>^B
    family.emplace_back(std::move(amps), Dims{11, 11}, Labels{"A", "B"});
  }
  CVec amps(static_cast<std::size_t>(3) * 121, cx{0.0, 0.0});
  const double c = 1.0 / std::sqrt(3.0);
  for (int l = 0; l < 3; ++l) amps[static_cast<std::size_t>(l) * 121 + l] = cx{c, 0.0};
  PureState psi(std::move(amps), {3, 11, 11}, {"R", "A", "B"});
  return MergeInstance{std::move(psi), std::move(family), default_gammas(), 3};
}

MergeInstance elimination_instance() {
  const double s = std::sqrt(0.5);
  std::vector<PureState> family;
  family.emplace_back(CVec{cx{1, 0}, cx{0, 0}, cx{0, 0}, cx{0, 0}}, Dims{2, 2}, Labels{"A", "B"});
  family.emplace_back(CVec{cx{0, 0}, cx{1, 0}, cx{0, 0}, cx{0, 0}}, Dims{2, 2}, Labels{"A", "B"});
  family.emplace_back(CVec{cx{0, 0}, cx{0, 0}, cx{s, 0}, cx{s, 0}}, Dims{2, 2}, Labels{"A", "B"});
  CVec amps(static_cast<std::size_t>(3) * 4, cx{0.0, 0.0});
  const double c = 1.0 / std::sqrt(3.0);
  for (int l = 0; l < 3; ++l)
    kern::axpy(cx{c, 0.0}, family[l].amps().data(), amps.data() + static_cast<std::size_t>(l) * 4,
               4);
  PureState psi(std::move(amps), {3, 2, 2}, {"R", "A", "B"});
  return MergeInstance{std::move(psi), std::move(family), default_gammas(), 3};
}

}  // namespace mergelab

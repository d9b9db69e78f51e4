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

#include "mergelab/measure.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mergelab {

namespace {

// C^9 lives at coordinates 2..10 of C^11.
constexpr int kNineOffset = 2;

CVec bra_of(const CVec& v) {
  CVec row(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) row[i] = std::conj(v[i]);
  return row;
}

}  // namespace

KrausFamily make_family(std::vector<LinearMap> ops, Labels actsOn) {
  if (ops.empty()) throw std::invalid_argument("measurement needs at least one operator");
  for (const auto& op : ops)
    if (op.domain != ops.front().domain)
      throw std::invalid_argument("measurement operators must share one domain");
  KrausFamily f;
  f.operators = std::move(ops);
  f.actsOn = std::move(actsOn);
  f.outcomeLabels.resize(f.operators.size());
  for (std::size_t i = 0; i < f.operators.size(); ++i) f.outcomeLabels[i] = static_cast<int>(i);
  return f;
}

CompletenessReport is_complete(const KrausFamily& f, double tol) {
  const int d = f.operators.front().domain_dim();
  CVec acc(static_cast<std::size_t>(d) * d, cx{0.0, 0.0});
  for (const auto& op : f.operators) {
    const LinearMap gram = compose(dagger(op), op);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += gram.mat[i];
  }
  double residual = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const cx want = (i == j) ? cx{1.0, 0.0} : cx{0.0, 0.0};
      residual = std::max(residual, std::abs(acc[static_cast<std::size_t>(i) * d + j] - want));
    }
  return {residual <= tol, residual};
}

ApplyResult apply(const KrausFamily& f, int k, const PureState& state) {
  const LinearMap& op = f.operators.at(k);
  Labels produces;
  if (op.codomain == op.domain) {
    produces = f.actsOn;
  } else if (op.codomain_dim() != 1) {
    throw std::invalid_argument("apply: dimension-changing operator needs explicit produced labels");
  }
  return apply(f, k, state, produces);
}

ApplyResult apply(const KrausFamily& f, int k, const PureState& state, const Labels& produces) {
  if (k < 0 || k >= f.outcomes()) throw std::invalid_argument("apply: outcome out of range");
  const BranchImage img = apply_branch(state, f.operators[k], f.actsOn, produces, PROB_FLOOR);
  return {img.weight, img.post};
}

KrausFamily build_b_measurement() {
  std::vector<LinearMap> ops;
  const double c = std::sqrt(1.0 / 3.0);
  for (int j = 0; j < 3; ++j) {
    CVec m(11 * 11, cx{0.0, 0.0});
    m[0 * 11 + 0] = cx{c, 0.0};
    m[1 * 11 + 1] = cx{c, 0.0};
    for (int i = 0; i < 3; ++i) {
      const int g = kNineOffset + 3 * j + i;
      m[static_cast<std::size_t>(g) * 11 + g] = cx{1.0, 0.0};
    }
    ops.emplace_back(std::move(m), Dims{11}, Dims{11});
  }
  return make_family(std::move(ops), {"B"});
}

std::vector<CVec> fourier_vectors() {
  static constexpr int kTriples[3][3] = {{0, 4, 8}, {1, 5, 6}, {2, 3, 7}};
  std::vector<CVec> out;
  const double c = 1.0 / std::sqrt(3.0);
  for (const auto& triple : kTriples) {
    for (int n = 0; n < 3; ++n) {
      CVec v(9, cx{0.0, 0.0});
      for (int p = 0; p < 3; ++p) {
        const double theta = 2.0 * std::numbers::pi * n * p / 3.0;
        v[triple[p]] = c * cx{std::cos(theta), std::sin(theta)};
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<CVec> a_measurement_vectors(const GammaParams& g) {
  std::vector<CVec> out;
  out.reserve(33);

  // k = 0..23: sqrt(3/36) on one C^2 coordinate plus sqrt(1/36) times a
  // signed support triple of C^9 whose third coefficient is -conj(gamma2).
  static constexpr int kTriples[3][3] = {{0, 4, 6}, {1, 5, 7}, {2, 3, 8}};
  static constexpr double kSigns[4][2] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
  const double s3 = std::sqrt(3.0 / 36.0);
  const double s1 = std::sqrt(1.0 / 36.0);
  const cx third = -std::conj(g.gamma2) * s1;
  for (int k = 0; k < 24; ++k) {
    const int triple = k / 8;
    const int pattern = (k % 8) / 2;
    const int qubit = (k % 4) < 2 ? 0 : 1;
    const double qubitSign = (k % 2 == 0) ? 1.0 : -1.0;
    CVec v(11, cx{0.0, 0.0});
    v[qubit] = cx{qubitSign * s3, 0.0};
    v[kNineOffset + kTriples[triple][0]] = cx{kSigns[pattern][0] * s1, 0.0};
    v[kNineOffset + kTriples[triple][1]] = cx{kSigns[pattern][1] * s1, 0.0};
    v[kNineOffset + kTriples[triple][2]] = third;
    out.push_back(std::move(v));
  }

  // k = 24..32: sqrt(28/36) times a Fourier vector, zero on C^2.
  const double s28 = std::sqrt(28.0 / 36.0);
  for (const CVec& w : fourier_vectors()) {
    CVec v(11, cx{0.0, 0.0});
    for (int p = 0; p < 9; ++p) v[kNineOffset + p] = s28 * w[p];
    out.push_back(std::move(v));
  }
  return out;
}

LinearMap conditioning_shift(int s) {
  CVec m(11 * 11, cx{0.0, 0.0});
  m[0 * 11 + 0] = cx{1.0, 0.0};
  m[1 * 11 + 1] = cx{1.0, 0.0};
  for (int p = 0; p < 9; ++p) {
    const int q = ((p + s) % 9 + 9) % 9;
    m[static_cast<std::size_t>(kNineOffset + q) * 11 + (kNineOffset + p)] = cx{1.0, 0.0};
  }
  return LinearMap(std::move(m), {11}, {11});
}

KrausFamily build_a_measurement(int j, const GammaParams& g) {
  if (j < 0 || j > 2) throw std::invalid_argument("build_a_measurement: j must be 0, 1 or 2");
  const auto vectors = a_measurement_vectors(g);
  const LinearMap shift = conditioning_shift((6 * j) % 9);
  std::vector<LinearMap> ops;
  ops.reserve(vectors.size());
  for (const CVec& v : vectors) {
    LinearMap bra(bra_of(v), Dims{11}, Dims{1});
    ops.push_back(compose(bra, shift));
  }
  return make_family(std::move(ops), {"A"});
}

}  // namespace mergelab

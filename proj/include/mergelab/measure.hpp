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

#ifndef MERGELAB_MEASURE_HPP
#define MERGELAB_MEASURE_HPP

#include <optional>
#include <vector>

#include "mergelab/linalg.hpp"
#include "mergelab/states.hpp"

// Kraus measurement families and the concrete instrument of the two-way
// protocol: B's three-outcome block measurement and A's conditioned
// 33-outcome rank-1 measurements on C^2 (+) C^9.

namespace mergelab {

inline constexpr double TOL_COMPLETE = 1e-10;  // completeness residual bound
inline constexpr double PROB_FLOOR = 1e-14;    // branches below this carry no post state

// Measurement with Kraus operators sharing one domain signature. Operators
// may change dimensions (e.g. rank-1 bras consuming the system).
struct KrausFamily {
  std::vector<LinearMap> operators;
  Labels actsOn;                  // domain labels, one per domain factor
  std::vector<int> outcomeLabels; // defaults to 0..n-1

  int outcomes() const { return static_cast<int>(operators.size()); }
};

KrausFamily make_family(std::vector<LinearMap> ops, Labels actsOn);

struct CompletenessReport {
  bool complete = false;
  double residual = 0.0;  // max-abs entry of sum_k M_k^dag M_k - I
};
CompletenessReport is_complete(const KrausFamily& f, double tol = TOL_COMPLETE);

struct ApplyResult {
  double prob = 0.0;
  std::optional<PureState> post;  // empty when prob <= PROB_FLOOR
};
// Applies outcome k. Produced labels default to the acted labels when the
// codomain matches the domain, and to nothing when the codomain is trivial.
ApplyResult apply(const KrausFamily& f, int k, const PureState& state);
ApplyResult apply(const KrausFamily& f, int k, const PureState& state, const Labels& produces);

// B's three-outcome measurement: sqrt(1/3) on the C^2 block plus the
// projector onto one 3-dim slice {3j..3j+2} of the C^9 block. Acts on "B".
KrausFamily build_b_measurement();

// Nine orthonormal Fourier vectors in C^9, indexed t*3+n for the support
// triples t: (0,4,8), (1,5,6), (2,3,7) and DFT phases exp(i*2*pi*n*p/3).
// The printed period-6 phases fail triple orthonormality and the 33-outcome
// completeness test, which fixes this convention.
std::vector<CVec> fourier_vectors();

// The 33 rank-1 vectors phi_{k|0} on C^11 (before the bra conjugation).
std::vector<CVec> a_measurement_vectors(const GammaParams& g);

// A's 33-outcome measurement conditioned on B's outcome j. Operators are
// bras (codomain dim 1) acting on "A": row k equals conj(phi_{k|j}) with
// phi_{k|j} = (I2 (+) X9^{6j mod 9})^dag phi_{k|0}. The shift exponent is
// fixed by branch exactness: it must realign A's C^9 slices so that the
// family member l sits in slice l, as in the j = 0 case.
KrausFamily build_a_measurement(int j, const GammaParams& g);

// Unitary I2 (+) X9^s on C^11 (s steps of the C^9 shift).
LinearMap conditioning_shift(int s);

}  // namespace mergelab

#endif  // MERGELAB_MEASURE_HPP

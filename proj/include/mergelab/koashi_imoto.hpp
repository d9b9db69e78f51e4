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

#ifndef MERGELAB_KOASHI_IMOTO_HPP
#define MERGELAB_KOASHI_IMOTO_HPP

#include <vector>

#include "mergelab/linalg.hpp"
#include "mergelab/states.hpp"

// Koashi-Imoto block structure of the shared family: local isometries
// U^A: A -> a0 (x) aR and U^B: B -> b0 (x) bR align the state family into
//
//   (U^A (x) U^B) |psi> = sum_j sqrt(p_j) |j>_{a0} |j>_{b0} omega_j phi_j
//
// with a classical flag j, a redundant part omega_j both sides could drop,
// and an entangled part phi_j carrying all correlation with the reference.
// For this family every omega_j is trivial.

namespace mergelab {

struct KIBlock {
  double prob;      // weight p_j of the block
  PureState omega;  // redundant part on (aL, bL); trivial (1 x 1) here
  PureState phi;    // entangled part on (R, aR, bR), dims per block
};

struct KIDecomposition {
  std::vector<KIBlock> blocks;
  LinearMap embedA;  // isometry A -> flag (x) aR, codomain {flagDim, aRDim}
  LinearMap embedB;  // isometry B -> flag (x) bR
  int flagDim = 0;
};

// The hardcoded decomposition of build_instance(g): four blocks with
// weights (2/11, 3/11, 3/11, 3/11). Block 0 collects the two-dimensional
// summand; blocks 1..3 collect the residue classes mod 3 of the
// nine-dimensional summand. Throws on invalid gamma parameters.
KIDecomposition build_ki(const GammaParams& g);

struct KIVerification {
  bool ok = false;
  double residual = 0.0;  // l2 gap between (U^A (x) U^B)|psi> and the block form
  double embedDefectA = 0.0;
  double embedDefectB = 0.0;
  double probSum = 0.0;
};

// Checks a proposed decomposition against a concrete |psi> on (R, A, B):
// embeds both sides, rebuilds the flagged block sum and reports the gap.
// Works for any flag dimension and block shapes; the redundant parts must
// be trivial (one-dimensional).
KIVerification verify_ki(const PureState& psi, const KIDecomposition& ki,
                         double tol);

}  // namespace mergelab

#endif  // MERGELAB_KOASHI_IMOTO_HPP

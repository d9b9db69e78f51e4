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

#ifndef MERGELAB_STATES_HPP
#define MERGELAB_STATES_HPP

#include <array>
#include <vector>

#include "mergelab/linalg.hpp"

// Concrete states of the merging instance: an orthonormal three-member
// family on C^11 (x) C^11 built from phase-twisted maximally entangled
// blocks on C^2 (+) C^9, plus the purification over a 3-dim reference.

namespace mergelab {

// Unit-modulus phase parameters of the family. Valid iff |gamma_i| = 1,
// both are nonreal, and gamma2 != +-i*gamma1^2.
struct GammaParams {
  cx gamma1;
  cx gamma2;
};

GammaParams default_gammas();  // both exp(i*pi/4)
// Human-readable constraint violations; empty means valid. Never throws.
std::vector<std::string> validate_gammas(const GammaParams& g);

// Generalized shift/phase on C^k: X|l> = |l+1 mod k>, Z|l> = exp(i2πl/k)|l>.
LinearMap pauli_x(int k);
LinearMap pauli_z(int k);

// Maximally entangled (1/sqrt(K)) sum_l |l>|l> with labels {"A","B"}.
PureState phi_K(int K);

// The three orthonormal family members psi_l on A (x) B (11 x 11).
std::array<PureState, 3> build_family(const GammaParams& g);

struct MergeInstance {
  PureState psi;                  // purification over R (labels R, A, B)
  std::vector<PureState> family;  // D orthonormal states on A (x) B
  GammaParams gammas;
  int D = 3;
};

// The main instance: R:3, A:11, B:11. Throws std::invalid_argument when g
// violates the constraints.
MergeInstance build_instance(const GammaParams& g);

// Control instance for the optimizer: A is unentangled (|0>^A), so every
// complete rank-1 measurement on A merges it exactly.
MergeInstance trivial_instance();

// Two-qubit instance {|00>, |01>, |1+>}: distinguishable one-way by
// elimination, yet not mergeable coherently at zero cost.
MergeInstance elimination_instance();

}  // namespace mergelab

#endif  // MERGELAB_STATES_HPP

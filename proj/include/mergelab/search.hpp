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

#ifndef MERGELAB_SEARCH_HPP
#define MERGELAB_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "mergelab/linalg.hpp"
#include "mergelab/states.hpp"

// Variational search over zero-cost one-way strategies: A applies a rank-1
// Kraus family (rows of an isometry M, up to maxKraus outcomes), announces
// the outcome, and B answers with its optimal recovery isometry. The
// objective
//
//   J(M) = sum_a || X_a ||_1^2,   X_a = C_a^T conj(T),
//
// is the decoder-optimal average fidelity. The seesaw alternates exact
// decoder evaluation (3x3 Hermitian spectra after a one-time Cholesky of
// the target Gram) with a gradient/polar-retraction step on M, backtracking
// until monotone. J < 1 over many restarts is the evidence that no zero-cost
// one-way protocol merges the family.

namespace mergelab {

struct SearchConfig {
  int restarts = 100;
  int maxKraus = 121;   // Kraus rows; must be >= dim(A)
  int iterations = 300;
  std::uint64_t seed = 1;
  double tolerance = 1e-10;  // stop once a step gains less than this
  int threads = 0;           // 0 = hardware concurrency; results independent of it
  // Optional probe fired after every accepted step.
  std::function<void(int restart, int iter, double J)> onIteration;
};

struct RestartResult {
  int restart = 0;
  std::uint64_t seed = 0;  // derived per-restart seed
  int iterations = 0;
  double best = 0.0;
};

struct SearchReport {
  double bestFidelitySq = 0.0;
  double gapEstimate = 0.0;  // 1 - bestFidelitySq
  int bestRestart = -1;
  std::vector<RestartResult> perRestart;
  LinearMap bestKraus;  // rows are the Kraus bras, codomain {maxKraus}
};

// Decoder-optimal average fidelity for a fixed Kraus stack (rows of
// `kraus`, domain dim(A)). Completeness of the stack is the caller's
// business; J is well defined either way.
double decoder_objective(const MergeInstance& inst, const LinearMap& kraus);

SearchReport optimize_one_way_zero_cost(const MergeInstance& inst,
                                        const SearchConfig& cfg);

}  // namespace mergelab

#endif  // MERGELAB_SEARCH_HPP

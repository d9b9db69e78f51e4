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

#ifndef MERGELAB_CORRECTION_HPP
#define MERGELAB_CORRECTION_HPP

#include <optional>
#include <vector>

#include "mergelab/linalg.hpp"

// Receiver-side correction isometries: exact transfer of a branch state to
// the target when the reference-side reductions agree, and the trace-norm
// optimum when they do not.

namespace mergelab {

// Exactness gate: trace distance between the reference reductions.
inline constexpr double TOL_EXACT_GRAM = 1e-8;

struct CorrectionResult {
  LinearMap isometry;           // maps the branch's non-reference side into the target's
  double achievedFidelitySq = 0.0;
  bool exact = false;
};

// Deterministic completion control: orders in which canonical basis vectors
// are tried when extending partial isometries. Empty means 0,1,2,...
struct CompletionOptions {
  std::vector<int> domainOrder;
  std::vector<int> codomainOrder;
};

// Solves (I_ref (x) V)|post> = |target> for an isometry V acting on all
// non-reference factors of `post`, mapping them onto all non-reference
// factors of `target`. Exists iff both reference reductions match within
// TOL_EXACT_GRAM (trace distance); returns nullopt otherwise.
std::optional<CorrectionResult> solve_exact_correction(
    const PureState& post, const PureState& target,
    const std::string& refLabel = "R", const CompletionOptions& opts = {});

// Maximum of |<target|(I_ref (x) V)|post>|^2 over isometries V, achieved by
// the polar maximizer of the rank-<=ref cross operator; equals the squared
// trace norm of sum_r |c_r><t_r|.
CorrectionResult optimal_recovery_fidelity(const PureState& post,
                                           const PureState& target,
                                           const std::string& refLabel = "R");

}  // namespace mergelab

#endif  // MERGELAB_CORRECTION_HPP

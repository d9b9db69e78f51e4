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

#ifndef MERGELAB_PROTOCOLS_HPP
#define MERGELAB_PROTOCOLS_HPP

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mergelab/linalg.hpp"
#include "mergelab/measure.hpp"
#include "mergelab/states.hpp"

// LOCC protocols as step lists over labeled branches. A protocol moves A's
// share of the input onto B's side (label "Bp"), possibly consuming a
// maximally entangled resource Phi_K on (Abar, Bbar) and classical messages.
// simulate() expands every outcome branch, applies conditioned corrections
// and grades each leaf against the merged target.

namespace mergelab {

enum class Party { A, B };
enum class Direction { TwoWay, OneWayAB, OneWayBA };
const char* direction_string(Direction d);

// Conditioned measurement. The family is picked by the values of the
// outcomes known to the acting party (own outcomes plus received messages),
// falling back to the {}-keyed entry for unconditioned steps. `produces`
// overrides the default output labels when the codomain differs from the
// domain.
struct MeasureNode {
  Party party;
  Labels produces;
  std::map<std::vector<int>, KrausFamily> families;
};

// Conditioned isometry (or partial isometry covering the branch support);
// selected like MeasureNode families. Must preserve the branch norm.
struct CorrectNode {
  Party party;
  Labels actsOn;
  Labels produces;
  std::map<std::vector<int>, LinearMap> isometries;
};

// One-directional classical transfer of everything `from` knows so far.
struct MessageNode {
  Party from;
  Party to;
};

using Step = std::variant<MeasureNode, CorrectNode, MessageNode>;

struct Protocol {
  std::string name;
  int resourceK = 1;  // Phi_K consumed; cost in bits is log2(K)
  std::vector<Step> steps;
};

Direction classify(const Protocol& p);

struct BranchResult {
  std::vector<int> transcript;
  double probability = 0.0;
  double fidelitySq = 0.0;
  PureState finalState;
};

struct RunReport {
  std::string protocol;
  Direction direction = Direction::TwoWay;
  double costBits = 0.0;
  std::vector<BranchResult> branches;
  double totalProb = 0.0;
  double minFidelitySq = 0.0;
  double avgFidelitySq = 0.0;      // probability-weighted sum over branches
  double epsilonAchieved = 0.0;    // sqrt(1 - minFidelitySq)
};

// Observation point fired for every surviving branch after every step.
struct StepEvent {
  int step;
  const std::vector<int>& transcript;
  double probability;
  const PureState& state;
};
using StepHook = std::function<void(const StepEvent&)>;

// Runs all branches of `p` on `input` and grades the leaves against
// `target`. Grading conventions for degenerate protocols: target labels the
// leaf never produced count as |0> preparations, leftover labels are traced
// out. Branch enumeration is depth-first in outcome order, so reports are
// deterministic.
RunReport simulate(const Protocol& p, const PureState& input,
                   const PureState& target, const StepHook& hook = {});

// Fidelity of a leaf against the target under the grading conventions.
double graded_fidelity_sq(const PureState& finalState, const PureState& target);

// The input psi with A relabeled to Bp: what B should end up holding.
PureState merge_target(const MergeInstance& inst);
// state (x) Phi_K on (Abar, Bbar); returns `state` unchanged for K <= 1.
PureState attach_resource(const PureState& state, int K);
// simulate() with the instance's purification, resource and merged target.
RunReport run_merge(const Protocol& p, const MergeInstance& inst,
                    const StepHook& hook = {});

// Zero-cost two-way protocol: B's block measurement, A's conditioned
// 33-outcome measurement, then an exact correction on each of the 99
// branches. Throws if any branch fails to correct exactly.
Protocol build_two_way(const GammaParams& g);

// Unit-cost one-way protocol: both sides enter their block frames, A
// measures the block register jointly with its ebit half (6 outcomes) and
// then the flag in the Fourier basis (4 outcomes); one message lets B
// finish with an exact isometry on each of the 24 branches.
Protocol build_one_way(const GammaParams& g);

// One-way zero-cost guessing protocol for elimination_instance(): A
// measures its qubit, B prepends the announced value. Discriminates the
// family perfectly yet fails on superpositions.
Protocol build_elimination_protocol();

// Runs p on sum_l alpha[l] psi_l (plus resource) against the matching
// target superposition. alpha is normalized internally.
RunReport decode_superposition(const Protocol& p, const MergeInstance& inst,
                               const std::vector<cx>& alpha);

struct DiscriminationReport {
  int outcome = -1;                  // argmax bucket; == D for "none"
  double probability = 0.0;
  std::vector<double> distribution;  // D family buckets plus a complement
};

// Feeds family member l through p and accumulates, over branches, the
// probabilities of projecting the graded leaf onto each merged family
// member.
DiscriminationReport discriminate(const Protocol& p, const MergeInstance& inst,
                                  int l);

}  // namespace mergelab

#endif  // MERGELAB_PROTOCOLS_HPP

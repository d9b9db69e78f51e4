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

#include "mergelab/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "mergelab/correction.hpp"
#include "mergelab/kernels.hpp"
#include "mergelab/koashi_imoto.hpp"

namespace mergelab {
namespace {

struct WorkBranch {
  PureState state;
  double prob;
  std::vector<int> transcript;
};

template <typename T>
const T& select_keyed(const std::map<std::vector<int>, T>& table,
                      const std::vector<int>& key, const char* what) {
  auto it = table.find(key);
  if (it == table.end()) it = table.find({});
  if (it == table.end()) {
    throw std::runtime_error(std::string("no ") + what +
                             " entry matches the outcome key");
  }
  return it->second;
}

std::vector<int> known_values(const WorkBranch& b, const std::set<int>& known) {
  std::vector<int> key;
  key.reserve(known.size());
  for (int idx : known) key.push_back(b.transcript[static_cast<std::size_t>(idx)]);
  return key;
}

PureState basis_state(int dim, int index, const std::string& label) {
  CVec v(static_cast<std::size_t>(dim), cx(0.0, 0.0));
  v[static_cast<std::size_t>(index)] = cx(1.0, 0.0);
  return PureState(std::move(v), Dims{dim}, Labels{label});
}

// A's joint measurement on (a0, aR, Abar): block-diagonal in the flag. On
// flag 0 the six outcomes are the four Bell vectors (sigma_o (x) I)Phi_2 on
// the populated 2-dim slice of aR times the ebit half, plus the two unused
// directions |2,y>; on flags 1..3 outcome o picks |o mod 3>_{aR}|o/3>_{Abar}.
// Square amplitudes match across flags (1/4 of 2/11 vs 1/6 of 3/11), which
// keeps every outcome's posterior block weights uniform enough to stay
// exactly correctable.
KrausFamily combined_flag_measurement() {
  const double r2 = 1.0 / std::sqrt(2.0);
  std::vector<LinearMap> ops;
  ops.reserve(6);
  for (int o = 0; o < 6; ++o) {
    LinearMap K = LinearMap::zero(Dims{4, 3, 2}, Dims{4});
    auto set = [&K](int j, int x, int y, cx val) {
      K.mat[static_cast<std::size_t>(j) * 24 + (j * 3 + x) * 2 + y] =
          std::conj(val);
    };
    switch (o) {  // flag-0 component
      case 0: set(0, 0, 0, r2); set(0, 1, 1, r2); break;
      case 1: set(0, 1, 0, r2); set(0, 0, 1, r2); break;
      case 2: set(0, 0, 0, r2); set(0, 1, 1, -r2); break;
      case 3: set(0, 1, 0, r2); set(0, 0, 1, -r2); break;
      case 4: set(0, 2, 0, cx(1.0, 0.0)); break;
      case 5: set(0, 2, 1, cx(1.0, 0.0)); break;
      default: break;
    }
    for (int j = 1; j < 4; ++j) set(j, o % 3, o / 3, cx(1.0, 0.0));
    ops.push_back(std::move(K));
  }
  return make_family(std::move(ops), Labels{"a0", "aR", "Abar"});
}

// Fourier read-out of the flag: <f_t|j> = exp(-i 2 pi j t / 4) / 2. Erases
// which-block information while handing B the relative-phase pattern t.
KrausFamily fourier_flag_measurement() {
  const double pi = std::acos(-1.0);
  std::vector<LinearMap> ops;
  ops.reserve(4);
  for (int t = 0; t < 4; ++t) {
    LinearMap K = LinearMap::zero(Dims{4}, Dims{1});
    for (int j = 0; j < 4; ++j) {
      double th = -2.0 * pi * j * t / 4.0;
      K.mat[static_cast<std::size_t>(j)] = 0.5 * cx(std::cos(th), std::sin(th));
    }
    ops.push_back(std::move(K));
  }
  return make_family(std::move(ops), Labels{"a0"});
}

}  // namespace

const char* direction_string(Direction d) {
  switch (d) {
    case Direction::TwoWay: return "two-way";
    case Direction::OneWayAB: return "one-way-AB";
    case Direction::OneWayBA: return "one-way-BA";
  }
  return "unknown";
}

Direction classify(const Protocol& p) {
  bool ab = false;
  bool ba = false;
  for (const auto& s : p.steps) {
    if (const auto* m = std::get_if<MessageNode>(&s)) {
      (m->from == Party::A ? ab : ba) = true;
    }
  }
  if (ab && ba) return Direction::TwoWay;
  if (ba) return Direction::OneWayBA;
  return Direction::OneWayAB;  // message-free protocols land here too
}

double graded_fidelity_sq(const PureState& finalState,
                          const PureState& target) {
  PureState s = finalState;
  for (std::size_t i = 0; i < target.labels().size(); ++i) {
    if (!s.has_label(target.labels()[i])) {
      s = tensor(s, basis_state(target.dims()[i], 0, target.labels()[i]));
    }
  }
  bool extras = false;
  for (const auto& l : s.labels()) {
    if (!target.has_label(l)) {
      extras = true;
      break;
    }
  }
  if (!extras) return fidelity_sq(s, target);
  return fidelity_sq(reduce(s, target.labels()), target);
}

RunReport simulate(const Protocol& p, const PureState& input,
                   const PureState& target, const StepHook& hook) {
  if (p.resourceK < 1) throw std::invalid_argument("resourceK must be >= 1");

  std::vector<WorkBranch> branches;
  branches.push_back(WorkBranch{input, 1.0, {}});
  std::set<int> known[2];  // per party: transcript slots it has seen
  auto pidx = [](Party pt) { return pt == Party::A ? 0 : 1; };
  int slot = 0;

  for (std::size_t si = 0; si < p.steps.size(); ++si) {
    const Step& step = p.steps[si];
    if (const auto* msg = std::get_if<MessageNode>(&step)) {
      known[pidx(msg->to)].insert(known[pidx(msg->from)].begin(),
                                  known[pidx(msg->from)].end());
    } else if (const auto* meas = std::get_if<MeasureNode>(&step)) {
      std::vector<WorkBranch> next;
      for (auto& b : branches) {
        const KrausFamily& fam =
            select_keyed(meas->families,
                         known_values(b, known[pidx(meas->party)]), "family");
        for (int k = 0; k < fam.outcomes(); ++k) {
          ApplyResult ar = meas->produces.empty()
                               ? apply(fam, k, b.state)
                               : apply(fam, k, b.state, meas->produces);
          if (!ar.post) continue;
          WorkBranch nb{std::move(*ar.post), b.prob * ar.prob, b.transcript};
          nb.transcript.push_back(k);
          next.push_back(std::move(nb));
        }
      }
      branches = std::move(next);
      known[pidx(meas->party)].insert(slot);
      ++slot;
    } else {
      const auto& corr = std::get<CorrectNode>(step);
      for (auto& b : branches) {
        const LinearMap& iso =
            select_keyed(corr.isometries,
                         known_values(b, known[pidx(corr.party)]), "isometry");
        Dims dims;
        Labels labels;
        CVec raw = apply_to_labels_raw(b.state, iso, corr.actsOn, &dims,
                                       &labels, corr.produces);
        double n2 = kern::nrm2sq(raw.data(), raw.size());
        if (std::abs(n2 - 1.0) > 1e-6) {
          throw std::runtime_error("correction step changed the branch norm");
        }
        b.state = PureState::normalized(std::move(raw), std::move(dims),
                                        std::move(labels));
      }
    }
    if (hook) {
      for (const auto& b : branches) {
        hook(StepEvent{static_cast<int>(si), b.transcript, b.prob, b.state});
      }
    }
  }

  RunReport rep;
  rep.protocol = p.name;
  rep.direction = classify(p);
  rep.costBits = std::log2(static_cast<double>(p.resourceK));
  rep.minFidelitySq = 1.0;
  for (auto& b : branches) {
    double f = graded_fidelity_sq(b.state, target);
    rep.totalProb += b.prob;
    rep.avgFidelitySq += b.prob * f;
    rep.minFidelitySq = std::min(rep.minFidelitySq, f);
    rep.branches.push_back(
        BranchResult{std::move(b.transcript), b.prob, f, std::move(b.state)});
  }
  if (rep.branches.empty()) rep.minFidelitySq = 0.0;
  rep.epsilonAchieved = std::sqrt(std::clamp(1.0 - rep.minFidelitySq, 0.0, 1.0));
  return rep;
}

PureState merge_target(const MergeInstance& inst) {
  return inst.psi.relabeled(Labels{"R", "Bp", "B"});
}

PureState attach_resource(const PureState& state, int K) {
  if (K <= 1) return state;
  return tensor(state, phi_K(K).relabeled(Labels{"Abar", "Bbar"}));
}

RunReport run_merge(const Protocol& p, const MergeInstance& inst,
                    const StepHook& hook) {
  return simulate(p, attach_resource(inst.psi, p.resourceK),
                  merge_target(inst), hook);
}

Protocol build_two_way(const GammaParams& g) {
  MergeInstance inst = build_instance(g);
  PureState target = merge_target(inst);

  Protocol p;
  p.name = "two-way";
  p.resourceK = 1;

  std::map<std::vector<int>, KrausFamily> bFam;
  bFam[{}] = build_b_measurement();
  p.steps.push_back(MeasureNode{Party::B, {}, std::move(bFam)});
  p.steps.push_back(MessageNode{Party::B, Party::A});

  std::map<std::vector<int>, KrausFamily> aFam;
  for (int j = 0; j < 3; ++j) aFam[{j}] = build_a_measurement(j, g);
  p.steps.push_back(MeasureNode{Party::A, {}, std::move(aFam)});
  p.steps.push_back(MessageNode{Party::A, Party::B});

  // Every (j, k) leaf is maximally entangled with R again, so an exact
  // receiver isometry exists; solve one per transcript.
  RunReport pre = simulate(p, inst.psi, target);
  std::map<std::vector<int>, LinearMap> table;
  for (const auto& b : pre.branches) {
    auto sol = solve_exact_correction(b.finalState, target, "R");
    if (!sol) {
      throw std::runtime_error("two-way branch admits no exact correction");
    }
    table[b.transcript] = std::move(sol->isometry);
  }
  p.steps.push_back(
      CorrectNode{Party::B, Labels{"B"}, Labels{"Bp", "B"}, std::move(table)});
  return p;
}

Protocol build_one_way(const GammaParams& g) {
  MergeInstance inst = build_instance(g);
  KIDecomposition ki = build_ki(g);
  PureState target = merge_target(inst);

  Protocol p;
  p.name = "one-way";
  p.resourceK = 2;

  std::map<std::vector<int>, LinearMap> embA;
  embA[{}] = ki.embedA;
  p.steps.push_back(
      CorrectNode{Party::A, Labels{"A"}, Labels{"a0", "aR"}, std::move(embA)});
  std::map<std::vector<int>, LinearMap> embB;
  embB[{}] = ki.embedB;
  p.steps.push_back(
      CorrectNode{Party::B, Labels{"B"}, Labels{"b0", "bR"}, std::move(embB)});

  std::map<std::vector<int>, KrausFamily> joint;
  joint[{}] = combined_flag_measurement();
  p.steps.push_back(MeasureNode{Party::A, Labels{"a0"}, std::move(joint)});
  std::map<std::vector<int>, KrausFamily> flag;
  flag[{}] = fourier_flag_measurement();
  p.steps.push_back(MeasureNode{Party::A, {}, std::move(flag)});
  p.steps.push_back(MessageNode{Party::A, Party::B});

  RunReport pre = simulate(p, attach_resource(inst.psi, p.resourceK), target);
  std::map<std::vector<int>, LinearMap> table;
  for (const auto& b : pre.branches) {
    PureState aligned = permuted(b.finalState, Labels{"R", "b0", "bR", "Bbar"});
    auto sol = solve_exact_correction(aligned, target, "R");
    if (!sol) {
      throw std::runtime_error("one-way branch admits no exact correction");
    }
    table[b.transcript] = std::move(sol->isometry);
  }
  p.steps.push_back(CorrectNode{Party::B, Labels{"b0", "bR", "Bbar"},
                                Labels{"Bp", "B"}, std::move(table)});
  return p;
}

Protocol build_elimination_protocol() {
  Protocol p;
  p.name = "elimination";
  p.resourceK = 1;

  std::vector<LinearMap> comp;
  for (int a = 0; a < 2; ++a) {
    LinearMap K = LinearMap::zero(Dims{2}, Dims{1});
    K.mat[static_cast<std::size_t>(a)] = cx(1.0, 0.0);
    comp.push_back(std::move(K));
  }
  std::map<std::vector<int>, KrausFamily> aFam;
  aFam[{}] = make_family(std::move(comp), Labels{"A"});
  p.steps.push_back(MeasureNode{Party::A, {}, std::move(aFam)});
  p.steps.push_back(MessageNode{Party::A, Party::B});

  // B takes the announced value at face value and prepends it.
  std::map<std::vector<int>, LinearMap> table;
  for (int a = 0; a < 2; ++a) {
    LinearMap V = LinearMap::zero(Dims{2}, Dims{2, 2});
    for (int b = 0; b < 2; ++b) {
      V.mat[static_cast<std::size_t>(a * 2 + b) * 2 + b] = cx(1.0, 0.0);
    }
    table[{a}] = std::move(V);
  }
  p.steps.push_back(
      CorrectNode{Party::B, Labels{"B"}, Labels{"Bp", "B"}, std::move(table)});
  return p;
}

RunReport decode_superposition(const Protocol& p, const MergeInstance& inst,
                               const std::vector<cx>& alpha) {
  if (alpha.size() != inst.family.size()) {
    throw std::invalid_argument("alpha must have one entry per family member");
  }
  const int dim = inst.family[0].total_dim();
  CVec acc(static_cast<std::size_t>(dim), cx(0.0, 0.0));
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    kern::axpy(alpha[l], inst.family[l].amps().data(), acc.data(), acc.size());
  }
  PureState chi = PureState::normalized(std::move(acc), inst.family[0].dims(),
                                        inst.family[0].labels());
  PureState chiMerged = chi.relabeled(Labels{"Bp", "B"});
  return simulate(p, attach_resource(chi, p.resourceK), chiMerged);
}

DiscriminationReport discriminate(const Protocol& p, const MergeInstance& inst,
                                  int l) {
  if (l < 0 || l >= static_cast<int>(inst.family.size())) {
    throw std::invalid_argument("family index out of range");
  }
  std::vector<PureState> targets;
  targets.reserve(inst.family.size());
  for (const auto& f : inst.family) {
    targets.push_back(f.relabeled(Labels{"Bp", "B"}));
  }
  RunReport rep = simulate(p, attach_resource(inst.family[static_cast<std::size_t>(l)], p.resourceK),
                           targets[static_cast<std::size_t>(l)]);

  DiscriminationReport dr;
  dr.distribution.assign(inst.family.size() + 1, 0.0);
  double total = 0.0;
  for (const auto& b : rep.branches) {
    total += b.probability;
    for (std::size_t m = 0; m < targets.size(); ++m) {
      dr.distribution[m] +=
          b.probability * graded_fidelity_sq(b.finalState, targets[m]);
    }
  }
  double assigned = std::accumulate(dr.distribution.begin(),
                                    dr.distribution.end() - 1, 0.0);
  dr.distribution.back() = std::max(0.0, total - assigned);
  dr.outcome = static_cast<int>(std::max_element(dr.distribution.begin(),
                                                 dr.distribution.end()) -
                                dr.distribution.begin());
  dr.probability = dr.distribution[static_cast<std::size_t>(dr.outcome)];
  return dr;
}

}  // namespace mergelab

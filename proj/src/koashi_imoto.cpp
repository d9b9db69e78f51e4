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

#include "mergelab/koashi_imoto.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mergelab/kernels.hpp"

namespace mergelab {
namespace {

PureState trivial_omega() {
  return PureState(CVec{cx(1.0, 0.0)}, Dims{1, 1}, Labels{"aL", "bL"});
}

// A -> flag (x) aR for C^11 = C^2 (+) C^9: coordinates 0..1 go to flag 0,
// and coordinate 2+c of the shift block goes to flag 1 + (c mod 3) with
// block-internal index floor(c/3). The mod-3 classes are exactly the orbits
// the X9^3 twists act within, which is what makes the flag classical.
LinearMap block_embed() {
  const int flagDim = 4;
  const int rDim = 3;
  LinearMap m = LinearMap::zero(Dims{11}, Dims{flagDim, rDim});
  auto set = [&m](int flag, int idx, int col) {
    m.mat[static_cast<std::size_t>(flag * 3 + idx) * 11 + col] = cx(1.0, 0.0);
  };
  set(0, 0, 0);
  set(0, 1, 1);
  for (int c = 0; c < 9; ++c) set(1 + c % 3, c / 3, 2 + c);
  return m;
}

PureState block0_phi(const GammaParams& g) {
  // (1/sqrt(3)) sum_l |l> Psi_l on the two-dimensional summand, where
  // Psi_0 = Phi_2, Psi_1 = gamma1 (X (x) I) Phi_2, Psi_2 = gamma2 (Z (x) I) Phi_2.
  const double s = 1.0 / std::sqrt(6.0);
  CVec amps(12, cx(0.0, 0.0));
  auto at = [&amps](int l, int a, int b) -> cx& {
    return amps[static_cast<std::size_t>(l * 4 + a * 2 + b)];
  };
  at(0, 0, 0) = s;
  at(0, 1, 1) = s;
  at(1, 1, 0) = g.gamma1 * s;
  at(1, 0, 1) = g.gamma1 * s;
  at(2, 0, 0) = g.gamma2 * s;
  at(2, 1, 1) = -g.gamma2 * s;
  return PureState(std::move(amps), Dims{3, 2, 2}, Labels{"R", "aR", "bR"});
}

PureState shift_phi() {
  // (1/3) sum_{l,m} |l> |l+m mod 3> |m>: inside each mod-3 class the family
  // twists act as the qutrit shift, the same state for all three classes.
  CVec amps(27, cx(0.0, 0.0));
  for (int l = 0; l < 3; ++l) {
    for (int m = 0; m < 3; ++m) {
      amps[static_cast<std::size_t>(l * 9 + ((l + m) % 3) * 3 + m)] =
          cx(1.0 / 3.0, 0.0);
    }
  }
  return PureState(std::move(amps), Dims{3, 3, 3}, Labels{"R", "aR", "bR"});
}

}  // namespace

KIDecomposition build_ki(const GammaParams& g) {
  auto problems = validate_gammas(g);
  if (!problems.empty()) throw std::invalid_argument(problems.front());

  KIDecomposition ki;
  ki.flagDim = 4;
  ki.embedA = block_embed();
  ki.embedB = block_embed();
  ki.blocks.push_back({2.0 / 11.0, trivial_omega(), block0_phi(g)});
  for (int j = 1; j <= 3; ++j) {
    ki.blocks.push_back({3.0 / 11.0, trivial_omega(), shift_phi()});
  }
  return ki;
}

KIVerification verify_ki(const PureState& psi, const KIDecomposition& ki,
                         double tol) {
  for (const auto& blk : ki.blocks) {
    if (blk.omega.total_dim() != 1) {
      throw std::invalid_argument("verify_ki needs trivial redundant parts");
    }
  }
  if (ki.embedA.codomain.size() != 2 || ki.embedB.codomain.size() != 2 ||
      ki.embedA.codomain[0] != ki.flagDim ||
      ki.embedB.codomain[0] != ki.flagDim) {
    throw std::invalid_argument("embed codomains must be {flag, rest}");
  }

  PureState p = permuted(psi, Labels{"R", "A", "B"});
  const int rDim = p.dims()[0];
  const int dimA = p.dims()[1];
  const int dimB = p.dims()[2];
  if (ki.embedA.domain_dim() != dimA || ki.embedB.domain_dim() != dimB) {
    throw std::invalid_argument("embed domains do not match the state");
  }
  const int aRDim = ki.embedA.codomain[1];
  const int bRDim = ki.embedB.codomain[1];
  const int codA = ki.flagDim * aRDim;
  const int codB = ki.flagDim * bRDim;

  KIVerification v;
  v.embedDefectA = isometry_defect(ki.embedA);
  v.embedDefectB = isometry_defect(ki.embedB);

  // Direct contraction (U^A (x) U^B)|psi>, layout (R, a0, aR, b0, bR). Done
  // by hand so a far-from-isometric embed still yields a residual instead of
  // tripping state validation.
  CVec lhs(static_cast<std::size_t>(rDim) * codA * codB, cx(0.0, 0.0));
  for (int l = 0; l < rDim; ++l) {
    for (int ra = 0; ra < codA; ++ra) {
      for (int rb = 0; rb < codB; ++rb) {
        cx acc(0.0, 0.0);
        for (int a = 0; a < dimA; ++a) {
          cx ea = ki.embedA.mat[static_cast<std::size_t>(ra) * dimA + a];
          if (ea == cx(0.0, 0.0)) continue;
          for (int b = 0; b < dimB; ++b) {
            cx eb = ki.embedB.mat[static_cast<std::size_t>(rb) * dimB + b];
            if (eb == cx(0.0, 0.0)) continue;
            acc += ea * eb *
                   p.amps()[(static_cast<std::size_t>(l) * dimA + a) * dimB + b];
          }
        }
        lhs[(static_cast<std::size_t>(l) * codA + ra) * codB + rb] = acc;
      }
    }
  }

  CVec rhs(lhs.size(), cx(0.0, 0.0));
  v.probSum = 0.0;
  for (std::size_t j = 0; j < ki.blocks.size(); ++j) {
    const KIBlock& blk = ki.blocks[j];
    v.probSum += blk.prob;
    const Dims& pd = blk.phi.dims();
    if (pd.size() != 3 || pd[0] != rDim || pd[1] > aRDim || pd[2] > bRDim) {
      throw std::invalid_argument("block phi dims exceed the embedded space");
    }
    cx scale = std::sqrt(blk.prob) * blk.omega.amps()[0];
    for (int l = 0; l < pd[0]; ++l) {
      for (int x = 0; x < pd[1]; ++x) {
        for (int y = 0; y < pd[2]; ++y) {
          std::size_t flat =
              ((static_cast<std::size_t>(l) * ki.flagDim + j) * aRDim + x) *
                  static_cast<std::size_t>(codB) +
              j * bRDim + y;
          rhs[flat] +=
              scale *
              blk.phi.amps()[(static_cast<std::size_t>(l) * pd[1] + x) * pd[2] +
                             y];
        }
      }
    }
  }

  kern::axpy(cx(-1.0, 0.0), rhs.data(), lhs.data(), lhs.size());
  v.residual = std::sqrt(kern::nrm2sq(lhs.data(), lhs.size()));
  v.ok = v.residual <= tol && v.embedDefectA <= tol && v.embedDefectB <= tol &&
         std::abs(v.probSum - 1.0) <= tol;
  return v;
}

}  // namespace mergelab

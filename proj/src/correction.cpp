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

#include "mergelab/correction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mergelab/kernels.hpp"

namespace mergelab {
namespace {

using RowMat =
    Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A residual below this adds no new direction during the paired
// Gram-Schmidt. Must sit well above sqrt(TOL_EXACT_GRAM) so both sides make
// the same rank call whenever the reductions pass the gate.
constexpr double kPairEps = 1e-6;

// Reference-side rows of a state: row r is <r|_ref psi on the remaining
// factors in their original order.
struct RefRows {
  int refDim = 0;
  int restDim = 0;
  Dims restDims;
  CVec rows;  // refDim x restDim, row-major

  const cx* row(int r) const {
    return rows.data() + static_cast<std::size_t>(r) * restDim;
  }
};

RefRows ref_rows(const PureState& psi, const std::string& refLabel) {
  Labels order{refLabel};
  for (const auto& l : psi.labels()) {
    if (l != refLabel) order.push_back(l);
  }
  PureState p = permuted(psi, order);
  RefRows rr;
  rr.refDim = p.dims()[0];
  rr.restDims.assign(p.dims().begin() + 1, p.dims().end());
  if (rr.restDims.empty()) rr.restDims.push_back(1);
  rr.restDim = p.total_dim() / rr.refDim;
  rr.rows = p.amps();
  return rr;
}

// Trace distance between the two reference reductions, 0.5*||rho_a - rho_b||_1.
double ref_trace_distance(const RefRows& a, const RefRows& b) {
  const int D = a.refDim;
  Eigen::MatrixXcd diff(D, D);
  for (int r = 0; r < D; ++r) {
    for (int s = 0; s < D; ++s) {
      // Tr_rest |psi><psi| has entries <c_s|c_r> at (r, s).
      cx va = kern::dotc(a.row(s), a.row(r), static_cast<std::size_t>(a.restDim));
      cx vb = kern::dotc(b.row(s), b.row(r), static_cast<std::size_t>(b.restDim));
      diff(r, s) = va - vb;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

void subtract_projections(const std::vector<CVec>& basis, CVec& v) {
  for (const auto& b : basis) {
    cx coef = kern::dotc(b.data(), v.data(), v.size());
    kern::axpy(-coef, b.data(), v.data(), v.size());
  }
}

std::vector<int> completion_order(const std::vector<int>& requested, int dim) {
  std::vector<int> seq(static_cast<std::size_t>(dim));
  std::iota(seq.begin(), seq.end(), 0);
  if (requested.empty()) return seq;
  std::vector<int> sorted = requested;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != seq) {
    throw std::invalid_argument(
        "completion order must be a permutation of 0..dim-1");
  }
  return requested;
}

// Extends `basis` to `wantTotal` orthonormal vectors with canonical basis
// vectors tried in `order`: first candidate with residual >= 1/2 of its
// mass wins, otherwise the candidate with the largest residual.
void complete_basis(std::vector<CVec>& basis, int dim,
                    const std::vector<int>& order, int wantTotal) {
  while (static_cast<int>(basis.size()) < wantTotal) {
    CVec best;
    double bestSq = -1.0;
    bool accepted = false;
    for (int c : order) {
      CVec v(static_cast<std::size_t>(dim), cx(0.0, 0.0));
      v[static_cast<std::size_t>(c)] = cx(1.0, 0.0);
      subtract_projections(basis, v);
      double sq = kern::nrm2sq(v.data(), v.size());
      if (sq >= 0.5) {
        best = std::move(v);
        bestSq = sq;
        accepted = true;
        break;
      }
      if (sq > bestSq) {
        best = std::move(v);
        bestSq = sq;
      }
    }
    (void)accepted;
    if (bestSq <= 0.0) {
      throw std::logic_error("basis completion ran out of directions");
    }
    kern::scal(cx(1.0 / std::sqrt(bestSq), 0.0), best.data(), best.size());
    basis.push_back(std::move(best));
  }
}

LinearMap pairs_to_map(const std::vector<CVec>& dom,
                       const std::vector<CVec>& cod, Dims domDims,
                       Dims codDims, int m, int n) {
  CVec mat(static_cast<std::size_t>(n) * m, cx(0.0, 0.0));
  for (std::size_t i = 0; i < dom.size(); ++i) {
    for (int row = 0; row < n; ++row) {
      cx wf = cod[i][static_cast<std::size_t>(row)];
      if (wf == cx(0.0, 0.0)) continue;
      for (int col = 0; col < m; ++col) {
        mat[static_cast<std::size_t>(row) * m + col] +=
            wf * std::conj(dom[i][static_cast<std::size_t>(col)]);
      }
    }
  }
  return LinearMap(std::move(mat), std::move(domDims), std::move(codDims));
}

}  // namespace

std::optional<CorrectionResult> solve_exact_correction(
    const PureState& post, const PureState& target,
    const std::string& refLabel, const CompletionOptions& opts) {
  RefRows P = ref_rows(post, refLabel);
  RefRows T = ref_rows(target, refLabel);
  if (P.refDim != T.refDim) {
    throw std::invalid_argument("reference dimensions differ");
  }
  if (ref_trace_distance(P, T) > TOL_EXACT_GRAM) return std::nullopt;

  // Paired Gram-Schmidt over the reference rows. Matching reductions make
  // the two sides produce the same coefficients, so u_i -> w_i transports
  // every row exactly: V c_r = sum_i <u_i|c_r> w_i = t_r.
  const int m = P.restDim;
  const int n = T.restDim;
  std::vector<CVec> u;
  std::vector<CVec> w;
  for (int r = 0; r < P.refDim; ++r) {
    CVec cu(P.row(r), P.row(r) + m);
    CVec cw(T.row(r), T.row(r) + n);
    subtract_projections(u, cu);
    subtract_projections(w, cw);
    double nu = std::sqrt(kern::nrm2sq(cu.data(), cu.size()));
    double nw = std::sqrt(kern::nrm2sq(cw.data(), cw.size()));
    bool keepU = nu > kPairEps;
    bool keepW = nw > kPairEps;
    if (keepU != keepW) return std::nullopt;  // rank call disagrees
    if (!keepU) continue;
    kern::scal(cx(1.0 / nu, 0.0), cu.data(), cu.size());
    kern::scal(cx(1.0 / nw, 0.0), cw.data(), cw.size());
    u.push_back(std::move(cu));
    w.push_back(std::move(cw));
  }

  // Deterministic canonical completion up to min(m, n) mapped pairs; the
  // result is a full isometry when m <= n and a partial isometry whose
  // initial space contains the branch support otherwise.
  const int pairs = std::min(m, n);
  complete_basis(u, m, completion_order(opts.domainOrder, m), pairs);
  complete_basis(w, n, completion_order(opts.codomainOrder, n), pairs);

  CorrectionResult res;
  res.isometry = pairs_to_map(u, w, P.restDims, T.restDims, m, n);
  res.achievedFidelitySq = 1.0;
  res.exact = true;
  return res;
}

CorrectionResult optimal_recovery_fidelity(const PureState& post,
                                           const PureState& target,
                                           const std::string& refLabel) {
  RefRows P = ref_rows(post, refLabel);
  RefRows T = ref_rows(target, refLabel);
  if (P.refDim != T.refDim) {
    throw std::invalid_argument("reference dimensions differ");
  }
  const int m = P.restDim;
  const int n = T.restDim;
  if (n < m) {
    throw std::invalid_argument(
        "optimal recovery needs codomain at least as large as domain");
  }

  // Cross operator X = sum_r |c_r><t_r|; max_V |tr(V X)| over isometries V
  // is the trace norm of X, reached at V = W U^dagger for X = U S W^dagger.
  RowMat X = RowMat::Zero(m, n);
  for (int r = 0; r < P.refDim; ++r) {
    for (int i = 0; i < m; ++i) {
      cx ci = P.row(r)[i];
      if (ci == cx(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) {
        X(i, j) += ci * std::conj(T.row(r)[j]);
      }
    }
  }

  CorrectionResult res;
  res.exact = false;
  if (X.norm() < 1e-150) {  // disjoint reference supports; nothing to align
    std::vector<CVec> dom;
    std::vector<CVec> cod;
    complete_basis(dom, m, completion_order({}, m), m);
    complete_basis(cod, n, completion_order({}, n), m);
    res.isometry = pairs_to_map(dom, cod, P.restDims, T.restDims, m, n);
    res.achievedFidelitySq = 0.0;
    return res;
  }

  Eigen::JacobiSVD<RowMat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double sum = svd.singularValues().sum();
  // Thin factors: U is m x m unitary, W is n x m with orthonormal columns,
  // so V = W U^dagger is an isometry with no completion step.
  RowMat V = svd.matrixV() * svd.matrixU().adjoint();
  CVec mat(static_cast<std::size_t>(n) * m);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < m; ++col) {
      mat[static_cast<std::size_t>(row) * m + col] = V(row, col);
    }
  }
  res.isometry = LinearMap(std::move(mat), P.restDims, T.restDims);
  res.achievedFidelitySq = std::min(1.0, sum * sum);
  return res;
}

}  // namespace mergelab

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

#include "mergelab/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mergelab/kernels.hpp"

namespace mergelab {

namespace {

using RowMat = Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

long long checked_total(const Dims& dims) {
  long long total = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("subsystem dimensions must be positive");
    total *= d;
  }
  return total;
}

void check_labels(const Dims& dims, const Labels& labels) {
  if (dims.size() != labels.size())
    throw std::invalid_argument("labels/dims size mismatch");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw std::invalid_argument("duplicate subsystem label");
}

// Strides for row-major layout: stride of the last factor is 1.
std::vector<long long> strides_of(const Dims& dims) {
  std::vector<long long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

int find_label(const Labels& labels, const std::string& name) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown subsystem label: " + name);
}

// Gathers amps into the order given by `perm` (new position p takes old
// factor perm[p]).
CVec permute_amps(const CVec& amps, const Dims& dims, const std::vector<int>& perm) {
  const std::size_t n = amps.size();
  const auto oldStrides = strides_of(dims);
  Dims newDims(perm.size());
  for (std::size_t p = 0; p < perm.size(); ++p) newDims[p] = dims[perm[p]];
  const auto newStrides = strides_of(newDims);

  CVec out(n);
  // Odometer over the new multi-index, tracking the old flat index.
  std::vector<int> digit(perm.size(), 0);
  long long oldIdx = 0;
  for (std::size_t flat = 0; flat < n; ++flat) {
    out[flat] = amps[oldIdx];
    for (int p = static_cast<int>(perm.size()) - 1; p >= 0; --p) {
      oldIdx += oldStrides[perm[p]];
      if (++digit[p] < newDims[p]) break;
      oldIdx -= static_cast<long long>(newDims[p]) * oldStrides[perm[p]];
      digit[p] = 0;
    }
  }
  return out;
}

}  // namespace

PureState::PureState(CVec amps, Dims dims, Labels labels)
    : amps_(std::move(amps)), dims_(std::move(dims)), labels_(std::move(labels)) {
  check_labels(dims_, labels_);
  if (checked_total(dims_) != static_cast<long long>(amps_.size()))
    throw std::invalid_argument("amplitude count does not match dims product");
  const double n2 = kern::nrm2sq(amps_.data(), amps_.size());
  if (std::abs(n2 - 1.0) > TOL_NORM)
    throw std::invalid_argument("state is not normalized");
}

PureState PureState::normalized(CVec amps, Dims dims, Labels labels) {
  const double n2 = kern::nrm2sq(amps.data(), amps.size());
  if (n2 < RANK_EPS * RANK_EPS)
    throw std::invalid_argument("cannot normalize a (near-)zero vector");
  kern::scal(cx{1.0 / std::sqrt(n2), 0.0}, amps.data(), amps.size());
  return PureState(std::move(amps), std::move(dims), std::move(labels));
}

int PureState::label_pos(const std::string& label) const { return find_label(labels_, label); }

bool PureState::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

PureState PureState::relabeled(const Labels& newLabels) const {
  return PureState(amps_, dims_, newLabels);
}

DensityOperator::DensityOperator(CVec matrix, Dims dims, Labels labels)
    : mat_(std::move(matrix)), dims_(std::move(dims)), labels_(std::move(labels)) {
  check_labels(dims_, labels_);
  const long long d = checked_total(dims_);
  dim_ = static_cast<int>(d);
  if (static_cast<long long>(mat_.size()) != d * d)
    throw std::invalid_argument("density matrix size does not match dims");
  double hermDefect = 0.0;
  cx trace{0.0, 0.0};
  for (int i = 0; i < dim_; ++i) {
    trace += mat_[static_cast<std::size_t>(i) * dim_ + i];
    for (int j = i; j < dim_; ++j) {
      const cx d1 = mat_[static_cast<std::size_t>(i) * dim_ + j];
      const cx d2 = std::conj(mat_[static_cast<std::size_t>(j) * dim_ + i]);
      hermDefect = std::max(hermDefect, std::abs(d1 - d2));
    }
  }
  if (hermDefect > TOL_NORM) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(trace - cx{1.0, 0.0}) > TOL_NORM)
    throw std::invalid_argument("density matrix trace is not 1");
  Eigen::Map<const RowMat> m(mat_.data(), dim_, dim_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -TOL_NORM)
    throw std::invalid_argument("density matrix is not positive semidefinite");
}

int DensityOperator::label_pos(const std::string& label) const {
  return find_label(labels_, label);
}

LinearMap::LinearMap(CVec m, Dims dom, Dims cod)
    : mat(std::move(m)), domain(std::move(dom)), codomain(std::move(cod)) {
  const long long dd = checked_total(domain);
  const long long cd = checked_total(codomain);
  if (static_cast<long long>(mat.size()) != dd * cd)
    throw std::invalid_argument("linear map entry count does not match dims");
}

int LinearMap::domain_dim() const {
  return static_cast<int>(checked_total(domain));
}

int LinearMap::codomain_dim() const {
  return static_cast<int>(checked_total(codomain));
}

LinearMap LinearMap::identity(int d) {
  CVec m(static_cast<std::size_t>(d) * d, cx{0.0, 0.0});
  for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i) * d + i] = cx{1.0, 0.0};
  return LinearMap(std::move(m), {d}, {d});
}

LinearMap LinearMap::zero(Dims dom, Dims cod) {
  const long long dd = checked_total(dom);
  const long long cd = checked_total(cod);
  return LinearMap(CVec(static_cast<std::size_t>(dd * cd), cx{0.0, 0.0}),
                   std::move(dom), std::move(cod));
}

LinearMap dagger(const LinearMap& m) {
  const int dd = m.domain_dim();
  const int cd = m.codomain_dim();
  CVec out(m.mat.size());
  for (int r = 0; r < cd; ++r)
    for (int c = 0; c < dd; ++c)
      out[static_cast<std::size_t>(c) * cd + r] =
          std::conj(m.mat[static_cast<std::size_t>(r) * dd + c]);
  return LinearMap(std::move(out), m.codomain, m.domain);
}

LinearMap compose(const LinearMap& a, const LinearMap& b) {
  if (a.domain_dim() != b.codomain_dim())
    throw std::invalid_argument("compose: dimension mismatch");
  const int m = a.codomain_dim();
  const int k = a.domain_dim();
  const int n = b.domain_dim();
  CVec out(static_cast<std::size_t>(m) * n);
  kern::gemm_nn(m, n, k, a.mat.data(), b.mat.data(), out.data());
  return LinearMap(std::move(out), b.domain, a.codomain);
}

double isometry_defect(const LinearMap& m) {
  const LinearMap gram = compose(dagger(m), m);
  const int d = m.domain_dim();
  double defect = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const cx want = (i == j) ? cx{1.0, 0.0} : cx{0.0, 0.0};
      defect = std::max(defect, std::abs(gram.mat[static_cast<std::size_t>(i) * d + j] - want));
    }
  return defect;
}

PureState tensor(const PureState& a, const PureState& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Labels labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  CVec out(a.amps().size() * b.amps().size());
  for (std::size_t i = 0; i < a.amps().size(); ++i)
    kern::scal_store(a.amps()[i], b.amps().data(), out.data() + i * b.amps().size(),
                     b.amps().size());
  return PureState(std::move(out), std::move(dims), std::move(labels));
}

LinearMap tensor(const LinearMap& a, const LinearMap& b) {
  const int adr = a.codomain_dim(), adc = a.domain_dim();
  const int bdr = b.codomain_dim(), bdc = b.domain_dim();
  CVec out(static_cast<std::size_t>(adr) * bdr * adc * bdc);
  const std::size_t cols = static_cast<std::size_t>(adc) * bdc;
  for (int ar = 0; ar < adr; ++ar)
    for (int br = 0; br < bdr; ++br) {
      cx* rowOut = out.data() + (static_cast<std::size_t>(ar) * bdr + br) * cols;
      for (int ac = 0; ac < adc; ++ac)
        kern::scal_store(a.at(ar, ac), b.mat.data() + static_cast<std::size_t>(br) * bdc,
                         rowOut + static_cast<std::size_t>(ac) * bdc, bdc);
    }
  Dims dom = a.domain;
  dom.insert(dom.end(), b.domain.begin(), b.domain.end());
  Dims cod = a.codomain;
  cod.insert(cod.end(), b.codomain.begin(), b.codomain.end());
  return LinearMap(std::move(out), std::move(dom), std::move(cod));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  const int da = a.total_dim(), db = b.total_dim();
  const int d = da * db;
  CVec out(static_cast<std::size_t>(d) * d);
  for (int i1 = 0; i1 < da; ++i1)
    for (int i2 = 0; i2 < db; ++i2)
      for (int j1 = 0; j1 < da; ++j1) {
        const cx aij = a.mat()[static_cast<std::size_t>(i1) * da + j1];
        cx* dst = out.data() + (static_cast<std::size_t>(i1) * db + i2) * d +
                  static_cast<std::size_t>(j1) * db;
        kern::scal_store(aij, b.mat().data() + static_cast<std::size_t>(i2) * db, dst, db);
      }
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Labels labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return DensityOperator(std::move(out), std::move(dims), std::move(labels));
}

CVec direct_sum_embed(const CVec& v2, const CVec& v9) {
  if (v2.size() != 2) throw std::invalid_argument("direct_sum_embed: first fragment must have dim 2");
  if (v9.size() != 9) throw std::invalid_argument("direct_sum_embed: second fragment must have dim 9");
  CVec out(11, cx{0.0, 0.0});
  out[0] = v2[0];
  out[1] = v2[1];
  for (int i = 0; i < 9; ++i) out[2 + i] = v9[i];
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const Labels& keep) {
  const Dims& dims = rho.dims();
  std::vector<int> keepPos, tracePos;
  for (const auto& k : keep) keepPos.push_back(rho.label_pos(k));
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (std::find(keepPos.begin(), keepPos.end(), i) == keepPos.end()) tracePos.push_back(i);

  const auto strides = strides_of(dims);
  long long keepDim = 1, traceDim = 1;
  for (int p : keepPos) keepDim *= dims[p];
  for (int p : tracePos) traceDim *= dims[p];

  // Flat index of a (keep multi-index, trace multi-index) pair.
  auto flatten = [&](long long keepIdx, long long traceIdx) {
    long long idx = 0;
    for (int i = static_cast<int>(keepPos.size()) - 1; i >= 0; --i) {
      idx += (keepIdx % dims[keepPos[i]]) * strides[keepPos[i]];
      keepIdx /= dims[keepPos[i]];
    }
    for (int i = static_cast<int>(tracePos.size()) - 1; i >= 0; --i) {
      idx += (traceIdx % dims[tracePos[i]]) * strides[tracePos[i]];
      traceIdx /= dims[tracePos[i]];
    }
    return idx;
  };

  const int d = rho.total_dim();
  CVec out(static_cast<std::size_t>(keepDim) * keepDim, cx{0.0, 0.0});
  for (long long i = 0; i < keepDim; ++i)
    for (long long j = 0; j < keepDim; ++j) {
      cx acc{0.0, 0.0};
      for (long long t = 0; t < traceDim; ++t)
        acc += rho.mat()[static_cast<std::size_t>(flatten(i, t)) * d + flatten(j, t)];
      out[static_cast<std::size_t>(i) * keepDim + j] = acc;
    }

  Dims outDims;
  Labels outLabels;
  for (int p : keepPos) {
    outDims.push_back(dims[p]);
    outLabels.push_back(rho.labels()[p]);
  }
  return DensityOperator(std::move(out), std::move(outDims), std::move(outLabels));
}

DensityOperator reduce(const PureState& psi, const Labels& keep) {
  std::vector<int> keepPos;
  for (const auto& k : keep) keepPos.push_back(psi.label_pos(k));
  std::vector<int> perm = keepPos;
  for (int i = 0; i < static_cast<int>(psi.dims().size()); ++i)
    if (std::find(keepPos.begin(), keepPos.end(), i) == keepPos.end()) perm.push_back(i);

  const CVec reshaped = permute_amps(psi.amps(), psi.dims(), perm);
  long long keepDim = 1;
  for (int p : keepPos) keepDim *= psi.dims()[p];
  const long long restDim = static_cast<long long>(psi.amps().size()) / keepDim;

  CVec out(static_cast<std::size_t>(keepDim) * keepDim);
  kern::gemm_ntc(keepDim, keepDim, restDim, reshaped.data(), reshaped.data(), out.data());

  Dims outDims;
  Labels outLabels;
  for (int p : keepPos) {
    outDims.push_back(psi.dims()[p]);
    outLabels.push_back(psi.labels()[p]);
  }
  return DensityOperator(std::move(out), std::move(outDims), std::move(outLabels));
}

SchmidtResult schmidt(const PureState& psi, const Labels& leftLabels) {
  std::vector<int> leftPos;
  for (const auto& l : leftLabels) leftPos.push_back(psi.label_pos(l));
  std::vector<int> perm = leftPos;
  for (int i = 0; i < static_cast<int>(psi.dims().size()); ++i)
    if (std::find(leftPos.begin(), leftPos.end(), i) == leftPos.end()) perm.push_back(i);
  if (perm.size() == leftPos.size())
    throw std::invalid_argument("schmidt: right side of the cut is empty");
  if (leftPos.empty()) throw std::invalid_argument("schmidt: left side of the cut is empty");

  long long leftDim = 1;
  for (int p : leftPos) leftDim *= psi.dims()[p];
  const long long rightDim = static_cast<long long>(psi.amps().size()) / leftDim;

  const CVec reshaped = permute_amps(psi.amps(), psi.dims(), perm);
  Eigen::Map<const RowMat> m(reshaped.data(), leftDim, rightDim);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SchmidtResult res;
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= RANK_EPS) break;
    res.coeffs.push_back(sv(i));
    CVec u(leftDim), v(rightDim);
    for (long long r = 0; r < leftDim; ++r) u[r] = svd.matrixU()(r, i);
    // m = U S V^dagger, so the right Schmidt vector is conj(V column).
    for (long long r = 0; r < rightDim; ++r) v[r] = std::conj(svd.matrixV()(r, i));
    res.left.push_back(std::move(u));
    res.right.push_back(std::move(v));
  }
  return res;
}

cx overlap(const PureState& a, const PureState& b) {
  const PureState bAligned = permuted(b, a.labels());
  if (a.dims() != bAligned.dims())
    throw std::invalid_argument("overlap: dimension mismatch");
  return kern::dotc(a.amps().data(), bAligned.amps().data(), a.amps().size());
}

double fidelity_sq(const PureState& state, const PureState& target) {
  const cx ov = overlap(target, state);
  return std::min(1.0, std::norm(ov));
}

double fidelity_sq(const DensityOperator& rho, const PureState& target) {
  const PureState t = permuted(target, rho.labels());
  if (t.dims() != rho.dims()) throw std::invalid_argument("fidelity_sq: dimension mismatch");
  const int d = rho.total_dim();
  CVec rt(d);
  kern::gemm_nt(d, 1, d, rho.mat().data(), t.amps().data(), rt.data());
  const cx val = kern::dotc(t.amps().data(), rt.data(), d);
  return std::clamp(val.real(), 0.0, 1.0);
}

double entropy_bits(const DensityOperator& rho) {
  Eigen::Map<const RowMat> m(rho.mat().data(), rho.total_dim(), rho.total_dim());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -TOL_NORM) throw std::invalid_argument("entropy_bits: non-PSD input");
    if (lam > EIG_FLOOR) h -= lam * std::log2(lam);
  }
  return h;
}

double cond_entropy_bits(const PureState& psi, const std::string& a, const std::string& b) {
  const double hab = entropy_bits(reduce(psi, {a, b}));
  const double hb = entropy_bits(reduce(psi, {b}));
  return hab - hb;
}

PureState permuted(const PureState& psi, const Labels& order) {
  if (order.size() != psi.labels().size())
    throw std::invalid_argument("permuted: label count mismatch");
  std::vector<int> perm;
  for (const auto& l : order) perm.push_back(psi.label_pos(l));
  std::set<int> uniq(perm.begin(), perm.end());
  if (uniq.size() != perm.size()) throw std::invalid_argument("permuted: repeated label");
  if (std::is_sorted(perm.begin(), perm.end())) {
    // Identity permutation: nothing to move.
    bool identity = true;
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (perm[i] != static_cast<int>(i)) identity = false;
    if (identity) return psi;
  }
  CVec out = permute_amps(psi.amps(), psi.dims(), perm);
  Dims dims(order.size());
  for (std::size_t i = 0; i < perm.size(); ++i) dims[i] = psi.dims()[perm[i]];
  return PureState(std::move(out), std::move(dims), Labels(order));
}

PureState squeezed(const PureState& psi) {
  Dims dims;
  Labels labels;
  for (std::size_t i = 0; i < psi.dims().size(); ++i) {
    if (psi.dims()[i] == 1) continue;
    dims.push_back(psi.dims()[i]);
    labels.push_back(psi.labels()[i]);
  }
  if (dims.empty()) {
    // Fully trivial state: keep the first factor so the type stays valid.
    dims.push_back(1);
    labels.push_back(psi.labels().at(0));
  }
  return PureState(psi.amps(), std::move(dims), std::move(labels));
}

CVec apply_to_labels_raw(const PureState& psi, const LinearMap& m,
                         const Labels& acts, Dims* outDims, Labels* outLabels,
                         const Labels& produces) {
  if (acts.size() != m.domain.size())
    throw std::invalid_argument("apply: acted label count must match map domain factors");
  std::vector<int> actPos;
  for (const auto& l : acts) actPos.push_back(psi.label_pos(l));
  for (std::size_t i = 0; i < actPos.size(); ++i)
    if (psi.dims()[actPos[i]] != m.domain[i])
      throw std::invalid_argument("apply: domain dimension mismatch on label " + acts[i]);
  if (!produces.empty() && produces.size() != m.codomain.size())
    throw std::invalid_argument("apply: produced label count must match map codomain factors");
  if (produces.empty() && m.codomain_dim() != 1)
    throw std::invalid_argument("apply: map with nontrivial codomain needs produced labels");

  std::vector<int> perm;
  Dims restDims;
  Labels restLabels;
  for (int i = 0; i < static_cast<int>(psi.dims().size()); ++i) {
    if (std::find(actPos.begin(), actPos.end(), i) != actPos.end()) continue;
    perm.push_back(i);
    restDims.push_back(psi.dims()[i]);
    restLabels.push_back(psi.labels()[i]);
  }
  perm.insert(perm.end(), actPos.begin(), actPos.end());

  const CVec reshaped = permute_amps(psi.amps(), psi.dims(), perm);
  long long restDim = 1;
  for (int d : restDims) restDim *= d;
  const int dom = m.domain_dim();
  const int cod = m.codomain_dim();

  CVec out(static_cast<std::size_t>(restDim) * cod);
  kern::gemm_nt(restDim, cod, dom, reshaped.data(), m.mat.data(), out.data());

  Dims dims = restDims;
  Labels labels = restLabels;
  if (!produces.empty()) {
    dims.insert(dims.end(), m.codomain.begin(), m.codomain.end());
    labels.insert(labels.end(), produces.begin(), produces.end());
  }
  if (dims.empty()) {
    dims.push_back(1);
    labels.push_back("scalar");
  }
  if (outDims != nullptr) *outDims = std::move(dims);
  if (outLabels != nullptr) *outLabels = std::move(labels);
  return out;
}

BranchImage apply_branch(const PureState& psi, const LinearMap& m,
                         const Labels& acts, const Labels& produces,
                         double floor) {
  Dims dims;
  Labels labels;
  CVec raw = apply_to_labels_raw(psi, m, acts, &dims, &labels, produces);
  BranchImage img;
  img.weight = kern::nrm2sq(raw.data(), raw.size());
  if (img.weight > floor) {
    kern::scal(cx{1.0 / std::sqrt(img.weight), 0.0}, raw.data(), raw.size());
    img.post = PureState(std::move(raw), std::move(dims), std::move(labels));
  }
  return img;
}

}  // namespace mergelab

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

#ifndef MERGELAB_LINALG_HPP
#define MERGELAB_LINALG_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

// Dense multipartite state/operator layer. States are flat row-major
// amplitude arrays over labeled subsystem factors; the first label is the
// most significant index digit. All heavy lifting routes through the
// kernels layer; decompositions (SVD, Hermitian eigensolver) use Eigen.

namespace mergelab {

using cx = std::complex<double>;
using CVec = std::vector<cx>;
using Dims = std::vector<int>;
using Labels = std::vector<std::string>;

// Numeric policy shared across modules.
inline constexpr double TOL_NORM = 1e-10;   // normalization / hermiticity / trace
inline constexpr double RANK_EPS = 1e-9;    // Schmidt / Gram-Schmidt rank cutoff
inline constexpr double EIG_FLOOR = 1e-12;  // eigenvalues below this count as 0 in entropies

// Pure state on a tensor product of labeled subsystems.
// Invariants: product of dims equals amplitude count, dims positive, labels
// unique, squared norm 1 within TOL_NORM. Unnormalized vectors are not
// representable; intermediate Kraus fragments live as raw CVec instead.
class PureState {
 public:
  PureState(CVec amps, Dims dims, Labels labels);

  // Scales the input to unit norm; rejects vectors with norm below RANK_EPS.
  static PureState normalized(CVec amps, Dims dims, Labels labels);

  const CVec& amps() const { return amps_; }
  const Dims& dims() const { return dims_; }
  const Labels& labels() const { return labels_; }
  int total_dim() const { return static_cast<int>(amps_.size()); }
  int label_pos(const std::string& label) const;          // throws on unknown label
  int dim_of(const std::string& label) const { return dims_[label_pos(label)]; }
  bool has_label(const std::string& label) const;

  PureState relabeled(const Labels& newLabels) const;

 private:
  CVec amps_;
  Dims dims_;
  Labels labels_;
};

// Density operator on the same labeled structure, row-major (d x d).
// Invariants: Hermitian and unit trace within TOL_NORM, smallest eigenvalue
// >= -TOL_NORM.
class DensityOperator {
 public:
  DensityOperator(CVec matrix, Dims dims, Labels labels);

  const CVec& mat() const { return mat_; }
  const Dims& dims() const { return dims_; }
  const Labels& labels() const { return labels_; }
  int total_dim() const { return dim_; }
  int label_pos(const std::string& label) const;

 private:
  CVec mat_;
  Dims dims_;
  Labels labels_;
  int dim_;
};

// Rectangular linear map between factored spaces, row-major with rows
// indexed by the codomain. Domain/codomain factor lists carry dims only;
// labels are attached at application sites.
struct LinearMap {
  CVec mat;
  Dims domain;
  Dims codomain;

  LinearMap() = default;
  LinearMap(CVec m, Dims dom, Dims cod);

  int domain_dim() const;
  int codomain_dim() const;
  cx at(int row, int col) const { return mat[static_cast<std::size_t>(row) * domain_dim() + col]; }

  static LinearMap identity(int d);
  static LinearMap zero(Dims dom, Dims cod);
};

LinearMap dagger(const LinearMap& m);
LinearMap compose(const LinearMap& a, const LinearMap& b);  // a after b
// Largest absolute entry of (m^dagger m - I); isometry check.
double isometry_defect(const LinearMap& m);

PureState tensor(const PureState& a, const PureState& b);
LinearMap tensor(const LinearMap& a, const LinearMap& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Embeds a dim-2 fragment and a dim-9 fragment into C^11 = C^2 (+) C^9
// (coordinates 0..1 and 2..10). Fragments may be unnormalized.
CVec direct_sum_embed(const CVec& v2, const CVec& v9);

DensityOperator partial_trace(const DensityOperator& rho, const Labels& keep);
// Partial trace of |psi><psi| onto `keep`, computed without forming the full
// projector.
DensityOperator reduce(const PureState& psi, const Labels& keep);

struct SchmidtResult {
  std::vector<double> coeffs;  // descending, > RANK_EPS
  std::vector<CVec> left;      // orthonormal vectors on the left factor
  std::vector<CVec> right;     // orthonormal vectors on the right factor
  int rank() const { return static_cast<int>(coeffs.size()); }
};
// Schmidt decomposition across the bipartition (leftLabels | rest). Ties in
// coefficients keep the SVD's ordering for the given input layout.
SchmidtResult schmidt(const PureState& psi, const Labels& leftLabels);

// |<target|state>|^2 resp. <target|rho|target>, labels aligned by name.
double fidelity_sq(const PureState& state, const PureState& target);
double fidelity_sq(const DensityOperator& rho, const PureState& target);
// <a|b> with b permuted into a's label order.
cx overlap(const PureState& a, const PureState& b);

// Von Neumann entropy in bits; eigenvalues below EIG_FLOOR are treated as 0.
double entropy_bits(const DensityOperator& rho);
// H(a|b) = H(ab) - H(b) for a pure psi on >= 2 labeled subsystems.
double cond_entropy_bits(const PureState& psi, const std::string& a, const std::string& b);

PureState permuted(const PureState& psi, const Labels& order);
// Drops dim-1 factors (at least one factor must remain).
PureState squeezed(const PureState& psi);

// Applies m to the listed labels (in that order); acted factors are replaced
// by `produces` (one label per codomain factor; empty iff codomain dim is 1).
// Resulting label order: untouched labels first (original order), then
// produces. The result is NOT renormalized; returns raw amplitudes.
CVec apply_to_labels_raw(const PureState& psi, const LinearMap& m,
                         const Labels& acts, Dims* outDims, Labels* outLabels,
                         const Labels& produces);

// Same, wrapped as a normalized state together with the branch weight
// (squared norm of the raw image). `post` is empty when weight <= floor.
struct BranchImage {
  double weight = 0.0;
  std::optional<PureState> post;
};
BranchImage apply_branch(const PureState& psi, const LinearMap& m,
                         const Labels& acts, const Labels& produces,
                         double floor);

}  // namespace mergelab

#endif  // MERGELAB_LINALG_HPP

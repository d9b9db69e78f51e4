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

#include "mergelab/search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include "mergelab/kernels.hpp"

namespace mergelab {
namespace {

using RowMat =
    Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kSigmaFloor = 1e-12;  // singular values treated as rank 0

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  return splitmix64(
      seed ^ splitmix64(static_cast<std::uint64_t>(restart) + 1));
}

// Problem constants shared by all restarts: |psi> as a (R x A x B) block,
// the target rows T (R x dimA*dimB; the merged state has the same
// amplitudes) and the Cholesky factor L of the target Gram, so that
// conj(T) = L Omega with orthonormal rows Omega.
struct Ctx {
  int dimR;
  int dimA;
  int dimB;
  CVec psi;
  RowMat L;
};

Ctx make_ctx(const MergeInstance& inst) {
  PureState p = permuted(inst.psi, Labels{"R", "A", "B"});
  Ctx c;
  c.dimR = p.dims()[0];
  c.dimA = p.dims()[1];
  c.dimB = p.dims()[2];
  c.psi = p.amps();

  const std::size_t rest = static_cast<std::size_t>(c.dimA) * c.dimB;
  RowMat gram(c.dimR, c.dimR);
  for (int r = 0; r < c.dimR; ++r) {
    for (int s = 0; s < c.dimR; ++s) {
      gram(r, s) = kern::dotc(c.psi.data() + r * rest, c.psi.data() + s * rest,
                              rest);
    }
  }
  Eigen::LLT<RowMat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("target reference Gram is not positive definite");
  }
  c.L = llt.matrixL();
  return c;
}

// J(M) and, when grad != nullptr, the ascent direction Z[a,i] =
// z_a conj(q_a[i]). M and grad are row-major (Aout x dimA).
double eval_objective(const Ctx& c, const CVec& M, int Aout, CVec* grad) {
  const int R = c.dimR;
  const int A = c.dimA;
  const int B = c.dimB;
  const std::size_t slab = static_cast<std::size_t>(A) * B;

  // D_r = M * Psi_r, branch rows for every Kraus index at once.
  std::vector<CVec> D(static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) {
    D[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(Aout) * B);
    kern::gemm_nn(static_cast<std::size_t>(Aout), static_cast<std::size_t>(B),
                  static_cast<std::size_t>(A), M.data(),
                  c.psi.data() + static_cast<std::size_t>(r) * slab,
                  D[static_cast<std::size_t>(r)].data());
  }

  if (grad) {
    grad->assign(static_cast<std::size_t>(Aout) * A, cx(0.0, 0.0));
  }

  double J = 0.0;
  RowMat G(R, R);
  RowMat Y(B, R);
  RowMat What(R, B);
  for (int a = 0; a < Aout; ++a) {
    auto row = [&](int r) {
      return D[static_cast<std::size_t>(r)].data() +
             static_cast<std::size_t>(a) * B;
    };
    for (int r = 0; r < R; ++r) {
      for (int s = 0; s < R; ++s) {
        G(r, s) = kern::dotc(row(r), row(s), static_cast<std::size_t>(B));
      }
    }
    RowMat H = c.L.adjoint() * G * c.L;
    Eigen::SelfAdjointEigenSolver<RowMat> es(
        H, grad ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    double z = 0.0;
    for (int i = 0; i < R; ++i) {
      z += std::sqrt(std::max(0.0, es.eigenvalues()[i]));
    }
    J += z * z;
    if (!grad) continue;

    // Y = C_a^T L has the same singular values; its SVD feeds the optimal
    // decoder through What = conj(T) V_a = sum_i (L v_i) u_i^dagger.
    for (int b = 0; b < B; ++b) {
      for (int r = 0; r < R; ++r) {
        cx acc(0.0, 0.0);
        for (int s = 0; s < R; ++s) acc += row(s)[b] * c.L(s, r);
        Y(b, r) = acc;
      }
    }
    What.setZero();
    for (int i = 0; i < R; ++i) {
      double sigma = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
      if (sigma <= kSigmaFloor) continue;
      Eigen::VectorXcd v = es.eigenvectors().col(i);
      Eigen::VectorXcd u = (Y * v) / sigma;
      What += (c.L * v) * u.adjoint();
    }
    for (int i = 0; i < A; ++i) {
      cx q(0.0, 0.0);
      for (int r = 0; r < R; ++r) {
        q += kern::dotu(What.data() + static_cast<std::size_t>(r) * B,
                        c.psi.data() + (static_cast<std::size_t>(r) * A + i) * B,
                        static_cast<std::size_t>(B));
      }
      (*grad)[static_cast<std::size_t>(a) * A + i] = z * std::conj(q);
    }
  }
  return J;
}

// Nearest isometry to the given tall matrix (polar factor).
void polar_project(CVec& M, int rows, int cols) {
  Eigen::Map<RowMat> m(M.data(), rows, cols);
  Eigen::JacobiSVD<RowMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  m = svd.matrixU() * svd.matrixV().adjoint();
}

RestartResult run_restart(const Ctx& c, const SearchConfig& cfg, int restart,
                          CVec* kraus) {
  const int Aout = cfg.maxKraus;
  RestartResult rr;
  rr.restart = restart;
  rr.seed = restart_seed(cfg.seed, restart);

  std::mt19937_64 rng(rr.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec M(static_cast<std::size_t>(Aout) * c.dimA);
  for (auto& e : M) {
    double re = gauss(rng);
    double im = gauss(rng);
    e = cx(re, im);
  }
  polar_project(M, Aout, c.dimA);

  CVec Z;
  double J = eval_objective(c, M, Aout, &Z);
  CVec trial(M.size());
  for (int it = 0; it < cfg.iterations; ++it) {
    double eta = 1.0;
    bool accepted = false;
    double Jtrial = J;
    for (int bt = 0; bt < 40; ++bt, eta *= 0.5) {
      kern::scal_store(cx(eta, 0.0), Z.data(), trial.data(), trial.size());
      kern::axpy(cx(1.0, 0.0), M.data(), trial.data(), trial.size());
      polar_project(trial, Aout, c.dimA);
      Jtrial = eval_objective(c, trial, Aout, nullptr);
      if (Jtrial >= J - 1e-12) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    M.swap(trial);
    double gain = Jtrial - J;
    J = eval_objective(c, M, Aout, &Z);  // refresh direction at the new point
    rr.iterations = it + 1;
    if (cfg.onIteration) cfg.onIteration(restart, it, J);
    if (gain < cfg.tolerance || J >= 1.0 - 1e-15) break;
  }

  rr.best = J;
  *kraus = std::move(M);
  return rr;
}

}  // namespace

double decoder_objective(const MergeInstance& inst, const LinearMap& kraus) {
  Ctx c = make_ctx(inst);
  if (kraus.domain_dim() != c.dimA) {
    throw std::invalid_argument("kraus domain must match dim(A)");
  }
  return eval_objective(c, kraus.mat, kraus.codomain_dim(), nullptr);
}

SearchReport optimize_one_way_zero_cost(const MergeInstance& inst,
                                        const SearchConfig& cfg) {
  Ctx c = make_ctx(inst);
  if (cfg.maxKraus < c.dimA) {
    throw std::invalid_argument("maxKraus must be at least dim(A)");
  }
  if (cfg.restarts < 1 || cfg.iterations < 1) {
    throw std::invalid_argument("restarts and iterations must be positive");
  }

  const int n = cfg.restarts;
  std::vector<RestartResult> results(static_cast<std::size_t>(n));
  std::vector<CVec> stacks(static_cast<std::size_t>(n));

  int threads = cfg.threads > 0
                    ? cfg.threads
                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  kern::active();  // resolve the backend before fanning out

  auto work = [&](int tid) {
    for (int r = tid; r < n; r += threads) {
      results[static_cast<std::size_t>(r)] =
          run_restart(c, cfg, r, &stacks[static_cast<std::size_t>(r)]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  SearchReport rep;
  rep.perRestart = std::move(results);
  for (int r = 0; r < n; ++r) {
    if (rep.bestRestart < 0 ||
        rep.perRestart[static_cast<std::size_t>(r)].best > rep.bestFidelitySq) {
      rep.bestFidelitySq = rep.perRestart[static_cast<std::size_t>(r)].best;
      rep.bestRestart = r;
    }
  }
  rep.gapEstimate = std::max(0.0, 1.0 - rep.bestFidelitySq);
  rep.bestKraus = LinearMap(std::move(stacks[static_cast<std::size_t>(rep.bestRestart)]),
                            Dims{c.dimA}, Dims{cfg.maxKraus});
  return rep;
}

}  // namespace mergelab

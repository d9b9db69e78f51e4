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

#ifndef MERGELAB_KERNELS_HPP
#define MERGELAB_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <string>

// Low-level complex-double kernels behind everything the tensor layer does.
//
// Every kernel has a scalar reference implementation and (on x86-64) an
// AVX2+FMA variant compiled in its own translation unit with -mavx2 -mfma.
// The active backend is resolved once at first use: the MERGELAB_KERNELS
// environment variable ("scalar" or "avx2") wins, otherwise runtime CPU
// detection picks the widest supported variant. The AVX2 entry points are
// only ever called after __builtin_cpu_supports confirms the ISA, so the
// binary stays safe on older CPUs. Variants are equivalence-tested against
// the scalar reference in tests/test_kernels.cpp.

namespace mergelab::kern {

using cx = std::complex<double>;

struct Ops {
  const char* name;
  // dotu: sum_i x[i]*y[i]      (no conjugation)
  cx (*dotu)(const cx* x, const cx* y, std::size_t n);
  // dotc: sum_i conj(x[i])*y[i]
  cx (*dotc)(const cx* x, const cx* y, std::size_t n);
  // nrm2sq: sum_i |x[i]|^2
  double (*nrm2sq)(const cx* x, std::size_t n);
  // axpy: y += a*x
  void (*axpy)(cx a, const cx* x, cx* y, std::size_t n);
  // scal: x *= a
  void (*scal)(cx a, cx* x, std::size_t n);
  // scal_store: y = a*x
  void (*scal_store)(cx a, const cx* x, cx* y, std::size_t n);
};

const Ops& scalar_ops();
// Null when this build has no AVX2 variant (non-x86 target).
const Ops* avx2_ops();
bool avx2_supported();

// Active backend; resolved once, stable for the process lifetime.
const Ops& active();
const char* active_name();
// Test hook: force a backend by name. Throws std::runtime_error for an
// unknown name or an unsupported ISA.
void force_backend(const std::string& name);

inline cx dotu(const cx* x, const cx* y, std::size_t n) { return active().dotu(x, y, n); }
inline cx dotc(const cx* x, const cx* y, std::size_t n) { return active().dotc(x, y, n); }
inline double nrm2sq(const cx* x, std::size_t n) { return active().nrm2sq(x, n); }
inline void axpy(cx a, const cx* x, cx* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void scal(cx a, cx* x, std::size_t n) { active().scal(a, x, n); }
inline void scal_store(cx a, const cx* x, cx* y, std::size_t n) { active().scal_store(a, x, y, n); }

// Row-major small-matrix products built on the vector kernels.
// gemm_nn:  C(m x n) = A(m x k) * B(k x n)
void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const cx* A, const cx* B, cx* C);
// gemm_nt:  C(m x n) = A(m x k) * B(n x k)^T        (row dot row, no conj)
void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const cx* A, const cx* B, cx* C);
// gemm_ntc: C(m x n) = A(m x k) * conj(B(n x k))^T  (row dot conj row)
void gemm_ntc(std::size_t m, std::size_t n, std::size_t k,
              const cx* A, const cx* B, cx* C);

}  // namespace mergelab::kern

#endif  // MERGELAB_KERNELS_HPP

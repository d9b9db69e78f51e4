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

// This translation unit is compiled with -mavx2 -mfma on x86-64 targets.
// Runtime CPU detection in kernels.cpp ensures these entry points are only
// called on CPUs that support AVX2 and FMA.

#include "mergelab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace mergelab::kern {
namespace {

// Interleaved complex<double>: one __m256d holds two complex values
// [re0, im0, re1, im1]. The multiply pattern below computes the usual
// (xr*yr - xi*yi, xr*yi + xi*yr) pairs; the conjugated variant flips the
// inner sign via fmsubadd.

inline __m256d cmul(__m256d x, __m256d y) {
  __m256d xr = _mm256_movedup_pd(x);        // [xr0, xr0, xr1, xr1]
  __m256d xi = _mm256_permute_pd(x, 0xF);   // [xi0, xi0, xi1, xi1]
  __m256d ys = _mm256_permute_pd(y, 0x5);   // [yi0, yr0, yi1, yr1]
  return _mm256_fmaddsub_pd(xr, y, _mm256_mul_pd(xi, ys));
}

inline __m256d cmul_conjx(__m256d x, __m256d y) {
  __m256d xr = _mm256_movedup_pd(x);
  __m256d xi = _mm256_permute_pd(x, 0xF);
  __m256d ys = _mm256_permute_pd(y, 0x5);
  return _mm256_fmsubadd_pd(xr, y, _mm256_mul_pd(xi, ys));
}

inline cx hsum_c(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return cx{out[0], out[1]};
}

cx v_dotu(const cx* x, const cx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(yd + 2 * i)));
  cx r = hsum_c(acc);
  if (i < n) r += x[i] * y[i];
  return r;
}

cx v_dotc(const cx* x, const cx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = _mm256_add_pd(acc, cmul_conjx(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(yd + 2 * i)));
  cx r = hsum_c(acc);
  if (i < n) r += std::conj(x[i]) * y[i];
  return r;
}

double v_nrm2sq(const cx* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double out[4];
  _mm256_store_pd(out, acc);
  double r = out[0] + out[1] + out[2] + out[3];
  if (i < n) r += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return r;
}

void v_axpy(cx a, const cx* x, cx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  __m256d ar = _mm256_set1_pd(a.real());
  __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    __m256d vs = _mm256_permute_pd(v, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, vs));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_scal(cx a, cx* x, std::size_t n) {
  double* xd = reinterpret_cast<double*>(x);
  __m256d ar = _mm256_set1_pd(a.real());
  __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    __m256d vs = _mm256_permute_pd(v, 0x5);
    _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, vs)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void v_scal_store(cx a, const cx* x, cx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  __m256d ar = _mm256_set1_pd(a.real());
  __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    __m256d vs = _mm256_permute_pd(v, 0x5);
    _mm256_storeu_pd(yd + 2 * i, _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, vs)));
  }
  for (; i < n; ++i) y[i] = a * x[i];
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops{"avx2", v_dotu, v_dotc, v_nrm2sq, v_axpy, v_scal, v_scal_store};
  return &ops;
}

}  // namespace mergelab::kern

#else

namespace mergelab::kern {
const Ops* avx2_ops() { return nullptr; }
}  // namespace mergelab::kern

#endif

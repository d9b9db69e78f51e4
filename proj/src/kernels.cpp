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

#include "mergelab/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace mergelab::kern {
namespace {

const Ops* g_active = nullptr;

const Ops* resolve() {
  const char* env = std::getenv("MERGELAB_KERNELS");
  if (env != nullptr && *env != '\0') {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0) {
      if (!avx2_supported())
        throw std::runtime_error("MERGELAB_KERNELS=avx2 but this CPU/build lacks AVX2+FMA");
      return avx2_ops();
    }
    throw std::runtime_error(std::string("unknown MERGELAB_KERNELS value: ") + env);
  }
  if (avx2_supported()) return avx2_ops();
  return &scalar_ops();
}

}  // namespace

bool avx2_supported() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  return avx2_ops() != nullptr && __builtin_cpu_supports("avx2") &&
         __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& active() {
  if (g_active == nullptr) g_active = resolve();
  return *g_active;
}

const char* active_name() { return active().name; }

void force_backend(const std::string& name) {
  if (name == "scalar") {
    g_active = &scalar_ops();
    return;
  }
  if (name == "avx2") {
    if (!avx2_supported())
      throw std::runtime_error("AVX2 backend unavailable on this CPU/build");
    g_active = avx2_ops();
    return;
  }
  throw std::runtime_error("unknown kernel backend: " + name);
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const cx* A, const cx* B, cx* C) {
  const Ops& o = active();
  for (std::size_t i = 0; i < m; ++i) {
    cx* crow = C + i * n;
    if (k == 0) {
      for (std::size_t j = 0; j < n; ++j) crow[j] = cx{0.0, 0.0};
      continue;
    }
    o.scal_store(A[i * k], B, crow, n);
    for (std::size_t l = 1; l < k; ++l) o.axpy(A[i * k + l], B + l * n, crow, n);
  }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const cx* A, const cx* B, cx* C) {
  const Ops& o = active();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      C[i * n + j] = o.dotu(A + i * k, B + j * k, k);
}

void gemm_ntc(std::size_t m, std::size_t n, std::size_t k,
              const cx* A, const cx* B, cx* C) {
  const Ops& o = active();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      C[i * n + j] = o.dotc(B + j * k, A + i * k, k);
}

}  // namespace mergelab::kern

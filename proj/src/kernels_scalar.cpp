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

// Scalar reference kernels. These are the semantic ground truth the SIMD
// variants are tested against; keep them simple.

namespace mergelab::kern {
namespace {

cx s_dotu(const cx* x, const cx* y, std::size_t n) {
  cx acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

cx s_dotc(const cx* x, const cx* y, std::size_t n) {
  cx acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double s_nrm2sq(const cx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void s_axpy(cx a, const cx* x, cx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_scal(cx a, cx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_scal_store(cx a, const cx* x, cx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", s_dotu, s_dotc, s_nrm2sq, s_axpy, s_scal, s_scal_store};
  return ops;
}

}  // namespace mergelab::kern

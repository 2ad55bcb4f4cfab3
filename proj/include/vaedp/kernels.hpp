//
// Copyright 2026 The vaedp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef VAEDP_KERNELS_HPP_
#define VAEDP_KERNELS_HPP_

#include <cstddef>

// Data-parallel inner loops behind the network math. Two lanes: a scalar
// reference and an AVX2 variant, selected once at runtime. Training
// trajectories must be bit-identical across lanes, so every kernel pins its
// floating-point evaluation order:
//
//   * matmul / matmul_at: each output element accumulates over k in
//     ascending order, one mul and one add per step (no FMA; the build sets
//     -ffp-contract=off). The AVX2 lane vectorizes across independent output
//     columns, which leaves the per-element order unchanged.
//   * dot / sumsq / matmul_bt rows: four interleaved partial sums
//     (k % 4 classes), combined as (s0+s1)+(s2+s3), then the tail in order.
//     Both lanes implement this same blocking.
//
// Element-independent kernels (axpy, scale) are order-free by construction.

namespace vaedp::kernels {

struct Backend {
  const char* name;

  // c = a @ b. a is m-by-k, b is k-by-n, c is m-by-n; c is overwritten.
  void (*matmul)(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t k, std::size_t n);

  // c = a @ b^T. a is m-by-k, b is n-by-k, c is m-by-n.
  void (*matmul_bt)(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n);

  // c = a^T @ b. a is k-by-m, b is k-by-n, c is m-by-n.
  void (*matmul_at)(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n);

  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);

  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sumsq)(const double* x, std::size_t n);
};

// Active backend. First call resolves it: the VAEDP_KERNELS environment
// variable ("scalar" or "avx2") wins, otherwise AVX2 when the CPU has it.
const Backend& active();

const Backend& scalar_backend();
// Null when not compiled in or the CPU lacks AVX2.
const Backend* avx2_backend();

// Force a lane by name ("scalar"/"avx2"); throws ParamError for unknown or
// unavailable lanes. Used by the equivalence tests.
void force_backend(const char* name);
void reset_backend();  // back to automatic selection

}  // namespace vaedp::kernels

#endif  // VAEDP_KERNELS_HPP_

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

// AVX2 lane. Compiled with -mavx2 and only dispatched to after a cpuid
// check. Uses separate mul/add (never FMA) so each output element sees the
// exact operation sequence of the scalar lane.

#include "vaedp/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define VAEDP_HAVE_AVX2_LANE 1
#include <immintrin.h>
#else
#define VAEDP_HAVE_AVX2_LANE 0
#endif

namespace vaedp::kernels {

#if VAEDP_HAVE_AVX2_LANE

namespace {

void matmul_avx2(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const __m256d av = _mm256_set1_pd(arow[p]);
      const double* brow = b + p * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        const __m256d bv = _mm256_loadu_pd(brow + j);
        const __m256d cv = _mm256_loadu_pd(crow + j);
        _mm256_storeu_pd(crow + j, _mm256_add_pd(cv, _mm256_mul_pd(av, bv)));
      }
      const double as = arow[p];
      for (; j < n; ++j) crow[j] += as * brow[j];
    }
  }
}

// Vectorized blocked-4 reduction: lane l holds partial sum s_l, combined as
// (s0+s1)+(s2+s3) to match the scalar lane bit for bit.
double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    const __m256d xv = _mm256_loadu_pd(x + p);
    const __m256d yv = _mm256_loadu_pd(y + p);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(xv, yv));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; p < n; ++p) s += x[p] * y[p];
  return s;
}

void matmul_bt_avx2(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = dot_avx2(arow, b + j * k, k);
    }
  }
}

void matmul_at_avx2(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = a + p * m;
    const double* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const __m256d av = _mm256_set1_pd(arow[i]);
      double* crow = c + i * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        const __m256d bv = _mm256_loadu_pd(brow + j);
        const __m256d cv = _mm256_loadu_pd(crow + j);
        _mm256_storeu_pd(crow + j, _mm256_add_pd(cv, _mm256_mul_pd(av, bv)));
      }
      const double as = arow[i];
      for (; j < n; ++j) crow[j] += as * brow[j];
    }
  }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double alpha, double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

double sumsq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

const Backend kAvx2Backend = {
    "avx2",      matmul_avx2, matmul_bt_avx2, matmul_at_avx2,
    axpy_avx2,   scale_avx2,  dot_avx2,       sumsq_avx2,
};

}  // namespace

const Backend* avx2_backend() {
  if (__builtin_cpu_supports("avx2")) return &kAvx2Backend;
  return nullptr;
}

#else  // !VAEDP_HAVE_AVX2_LANE

const Backend* avx2_backend() { return nullptr; }

#endif

}  // namespace vaedp::kernels

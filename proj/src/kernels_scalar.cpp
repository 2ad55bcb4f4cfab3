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

// Scalar reference lane. The AVX2 lane mirrors these evaluation orders
// exactly; see the contract in kernels.hpp.

#include <cstddef>

#include "vaedp/kernels.hpp"

namespace vaedp::kernels {
namespace {

void matmul_scalar(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        crow[j] += av * brow[j];
      }
    }
  }
}

// Blocked-4 reduction; the canonical order for all dot-like kernels.
double dot_blocked(const double* x, const double* y, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    s0 += x[p] * y[p];
    s1 += x[p + 1] * y[p + 1];
    s2 += x[p + 2] * y[p + 2];
    s3 += x[p + 3] * y[p + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; p < n; ++p) s += x[p] * y[p];
  return s;
}

void matmul_bt_scalar(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = dot_blocked(arow, b + j * k, k);
    }
  }
}

void matmul_at_scalar(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = a + p * m;
    const double* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double av = arow[i];
      double* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        crow[j] += av * brow[j];
      }
    }
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double sumsq_scalar(const double* x, std::size_t n) { return dot_blocked(x, x, n); }

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend = {
      "scalar",         matmul_scalar, matmul_bt_scalar, matmul_at_scalar,
      axpy_scalar,      scale_scalar,  dot_blocked,      sumsq_scalar,
  };
  return backend;
}

}  // namespace vaedp::kernels

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

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "vaedp/kernels.hpp"
#include "vaedp/rng.hpp"

using namespace vaedp;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

// Textbook ijk matmul with a plain running sum; numeric reference only.
std::vector<double> naive_matmul(const std::vector<double>& a,
                                 const std::vector<double>& b, std::size_t m,
                                 std::size_t k, std::size_t n) {
  std::vector<double> c(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * n + j];
      c[i * n + j] = s;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("scalar matmul matches naive reference") {
  Rng rng(7);
  for (std::size_t m : {1u, 3u}) {
    for (std::size_t k : {1u, 5u, 17u}) {
      for (std::size_t n : {1u, 4u, 9u}) {
        const auto a = random_vec(m * k, rng);
        const auto b = random_vec(k * n, rng);
        std::vector<double> c(m * n, -1.0);
        kernels::scalar_backend().matmul(a.data(), b.data(), c.data(), m, k, n);
        const auto ref = naive_matmul(a, b, m, k, n);
        for (std::size_t i = 0; i < c.size(); ++i) {
          CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("matmul_bt and matmul_at agree with transposed naive products") {
  Rng rng(11);
  const std::size_t m = 3, k = 7, n = 5;
  const auto a = random_vec(m * k, rng);
  const auto& sb = kernels::scalar_backend();

  // bt: b is n-by-k, logical product a @ b^T
  const auto b_nk = random_vec(n * k, rng);
  std::vector<double> bt(k * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p < k; ++p) bt[p * n + j] = b_nk[j * k + p];
  std::vector<double> c(m * n);
  sb.matmul_bt(a.data(), b_nk.data(), c.data(), m, k, n);
  auto ref = naive_matmul(a, bt, m, k, n);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }

  // at: a is k-by-m, logical product a^T @ b
  const auto a_km = random_vec(k * m, rng);
  const auto b_kn = random_vec(k * n, rng);
  std::vector<double> at(m * k);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t i = 0; i < m; ++i) at[i * k + p] = a_km[p * m + i];
  sb.matmul_at(a_km.data(), b_kn.data(), c.data(), m, k, n);
  ref = naive_matmul(at, b_kn, m, k, n);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("avx2 lane is bit-identical to the scalar lane") {
  const kernels::Backend* avx2 = kernels::avx2_backend();
  if (!avx2) return;  // CPU without AVX2: nothing to compare
  const auto& sb = kernels::scalar_backend();
  Rng rng(13);

  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t m = 1 + rng.next_u64() % 6;
    const std::size_t k = 1 + rng.next_u64() % 40;
    const std::size_t n = 1 + rng.next_u64() % 40;
    const auto a = random_vec(m * k, rng);
    const auto b = random_vec(k * n, rng);
    const auto b_nk = random_vec(n * k, rng);
    const auto a_km = random_vec(k * m, rng);

    std::vector<double> c1(m * n), c2(m * n);
    sb.matmul(a.data(), b.data(), c1.data(), m, k, n);
    avx2->matmul(a.data(), b.data(), c2.data(), m, k, n);
    CHECK(c1 == c2);

    sb.matmul_bt(a.data(), b_nk.data(), c1.data(), m, k, n);
    avx2->matmul_bt(a.data(), b_nk.data(), c2.data(), m, k, n);
    CHECK(c1 == c2);

    sb.matmul_at(a_km.data(), b.data(), c1.data(), m, k, n);
    avx2->matmul_at(a_km.data(), b.data(), c2.data(), m, k, n);
    CHECK(c1 == c2);

    auto y1 = random_vec(k, rng);
    auto y2 = y1;
    const auto x = random_vec(k, rng);
    sb.axpy(0.37, x.data(), y1.data(), k);
    avx2->axpy(0.37, x.data(), y2.data(), k);
    CHECK(y1 == y2);

    auto s1 = y1, s2 = y1;
    sb.scale(-1.93, s1.data(), k);
    avx2->scale(-1.93, s2.data(), k);
    CHECK(s1 == s2);

    CHECK(sb.dot(x.data(), y1.data(), k) == avx2->dot(x.data(), y1.data(), k));
    CHECK(sb.sumsq(x.data(), k) == avx2->sumsq(x.data(), k));
  }
}

TEST_CASE("dot and sumsq match plain accumulation within tolerance") {
  Rng rng(17);
  const auto x = random_vec(101, rng);
  const auto y = random_vec(101, rng);
  double dref = 0.0, sref = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dref += x[i] * y[i];
    sref += x[i] * x[i];
  }
  const auto& sb = kernels::scalar_backend();
  CHECK(sb.dot(x.data(), y.data(), x.size()) == doctest::Approx(dref).epsilon(1e-12));
  CHECK(sb.sumsq(x.data(), x.size()) == doctest::Approx(sref).epsilon(1e-12));
}

TEST_CASE("backend forcing") {
  kernels::force_backend("scalar");
  CHECK(std::string(kernels::active().name) == "scalar");
  kernels::reset_backend();
}

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
#include <limits>
#include <vector>

#include <json.hpp>

#include "vaedp/accountant.hpp"
#include "vaedp/error.hpp"

using namespace vaedp;

namespace {

// Independent direct-summation oracle for integer orders: plain
// double-precision binomial sum, no log-domain arithmetic.
double direct_sum_rdp(double q, double sigma, int alpha) {
  double a = 0.0;
  double coef = 1.0;
  for (int i = 0; i <= alpha; ++i) {
    if (i > 0) coef *= static_cast<double>(alpha - i + 1) / static_cast<double>(i);
    a += coef * std::pow(q, i) * std::pow(1.0 - q, alpha - i) *
         std::exp(static_cast<double>(i) * (i - 1) / (2.0 * sigma * sigma));
  }
  return std::log(a) / (alpha - 1);
}

}  // namespace

TEST_CASE("q=1 closed form: alpha/(2 z^2)") {
  CHECK(subsampled_gaussian_rdp(1.0, 1.0, 2.0) == 1.0);
  CHECK(subsampled_gaussian_rdp(1.0, 2.0, 16.0) == 2.0);
  RdpAccountant acct(1.0, 1.0, {2.0});
  acct.accumulate_step(1);
  CHECK(acct.eps_rdp()[0] == 1.0);
  acct.accumulate_step(9);
  CHECK(acct.eps_rdp()[0] == 10.0);
}

TEST_CASE("subsampled integer orders match the direct-summation oracle") {
  // Frozen spot value, cross-checked against an independent evaluation of the
  // binomial series: rdp(q=0.01, z=1, alpha=8) = 8.936439076060279e-4.
  const double v = subsampled_gaussian_rdp(0.01, 1.0, 8.0);
  CHECK(v == doctest::Approx(8.936439076060279e-4).epsilon(1e-10));
  for (const auto& [q, z, a] : std::vector<std::tuple<double, double, int>>{
           {0.01, 1.0, 2}, {0.1, 2.0, 16}, {0.05, 0.5, 4}, {0.004532, 1.0, 32}}) {
    CHECK(subsampled_gaussian_rdp(q, z, a) ==
          doctest::Approx(direct_sum_rdp(q, z, a)).epsilon(1e-9));
  }
}

TEST_CASE("fractional orders: frozen values and continuity with integers") {
  CHECK(subsampled_gaussian_rdp(0.01, 1.0, 8.5) ==
        doctest::Approx(1.0893888498892939e-3).epsilon(1e-8));
  CHECK(subsampled_gaussian_rdp(0.01, 1.0, 1.5) ==
        doctest::Approx(1.2725374349713685e-4).epsilon(1e-8));
  // The fractional series evaluated near an integer order approaches the
  // integer formula.
  const double at_int = subsampled_gaussian_rdp(0.02, 1.0, 6.0);
  const double near_int = subsampled_gaussian_rdp(0.02, 1.0, 6.0 + 1e-7);
  CHECK(near_int == doctest::Approx(at_int).epsilon(1e-4));
}

TEST_CASE("subsampled path converges to the closed form as q -> 1") {
  for (double alpha : {2.0, 4.0, 8.0}) {
    const double sub = subsampled_gaussian_rdp(1.0 - 1e-12, 1.0, alpha);
    CHECK(sub == doctest::Approx(alpha / 2.0).epsilon(1e-6));
  }
}

TEST_CASE("rdp additivity: T1 then T2 equals T1+T2 exactly") {
  RdpAccountant a(0.01, 1.0);
  a.accumulate_step(100);
  a.accumulate_step(23);
  RdpAccountant b(0.01, 1.0);
  b.accumulate_step(123);
  CHECK(a.eps_rdp() == b.eps_rdp());
  CHECK(a.to_eps_delta(1e-5).epsilon == b.to_eps_delta(1e-5).epsilon);
}

TEST_CASE("to_eps_delta plug-in: single order alpha=2, eps_rdp=1, delta=1/e -> 2") {
  RdpAccountant acct(1.0, 1.0, {2.0});
  acct.accumulate_step(1);  // eps_rdp(2) = 1
  const EpsDeltaBudget b = acct.to_eps_delta(std::exp(-1.0));
  CHECK(b.epsilon == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.minimizing_alpha == 2.0);
}

TEST_CASE("epsilon is monotone in T and in delta") {
  RdpAccountant acct(0.02, 1.0);
  double prev = 0.0;
  for (int chunk = 0; chunk < 5; ++chunk) {
    acct.accumulate_step(500);
    const double eps = acct.to_eps_delta(1e-5).epsilon;
    CHECK(eps >= prev);
    prev = eps;
  }
  CHECK(acct.to_eps_delta(1e-7).epsilon >= acct.to_eps_delta(1e-3).epsilon);
}

TEST_CASE("epsilon is non-increasing in z") {
  double prev = std::numeric_limits<double>::infinity();
  for (double z : {0.5, 1.0, 2.0, 4.0}) {
    RdpAccountant acct(0.02, z);
    acct.accumulate_step(1000);
    const double eps = acct.to_eps_delta(1e-5).epsilon;
    CHECK(eps <= prev);
    prev = eps;
  }
}

TEST_CASE("z=0 yields the infinite-epsilon warning state") {
  RdpAccountant acct(0.5, 0.0);
  acct.accumulate_step(10);
  const EpsDeltaBudget b = acct.to_eps_delta(1e-5);
  CHECK(b.non_private);
  CHECK(std::isinf(b.epsilon));
}

TEST_CASE("empty order grid is a configuration error") {
  CHECK_THROWS_AS(RdpAccountant(0.5, 1.0, {}), ConfigError);
}

TEST_CASE("reference-table cross-check: q=32/7061, z=1, 1000 epochs, delta=1.42e-4") {
  // 1000 epochs x ceil(7061/32) = 221000 steps; published value 15.73, match
  // required within 25% (the exact step count behind the published number is
  // not stated).
  RdpAccountant acct(32.0 / 7061.0, 1.0);
  acct.accumulate_step(221000);
  const double eps = acct.to_eps_delta(1.42e-4).epsilon;
  CHECK(eps > 15.73 * 0.75);
  CHECK(eps < 15.73 * 1.25);
  // Our accountant variant reproduces it much tighter than required.
  CHECK(eps == doctest::Approx(15.73).epsilon(0.01));
}

TEST_CASE("accountant export JSON carries the full ledger") {
  RdpAccountant acct(0.25, 1.5);
  acct.accumulate_step(42);
  const auto j = nlohmann::json::parse(acct.export_json(1e-4));
  CHECK(j["q"] == 0.25);
  CHECK(j["z"] == 1.5);
  CHECK(j["T"] == 42);
  CHECK(j["delta"] == 1e-4);
  CHECK(j["orders"].size() == default_rdp_orders().size());
  CHECK(j["eps_rdp"].size() == default_rdp_orders().size());
  CHECK(j["eps"].is_number());
  CHECK(j["minimizing_alpha"].is_number());
}

TEST_CASE("vae-ldp epsilon reproduces the reference pairs") {
  // d=100, bound=3 -> sensitivity 60.
  CHECK(vae_ldp_epsilon(10.0, 5.25e-4, 100, 3.0) ==
        doctest::Approx(23.66).epsilon(5e-4));
  CHECK(vae_ldp_epsilon(1.0, 5.25e-4, 100, 3.0) ==
        doctest::Approx(236.61).epsilon(5e-4));
  // 1/sigma scaling.
  CHECK(vae_ldp_epsilon(1.0, 5.25e-4, 100, 3.0) ==
        doctest::Approx(10.0 * vae_ldp_epsilon(10.0, 5.25e-4, 100, 3.0)));
  // d=2 time-series configuration.
  CHECK(vae_ldp_epsilon(10.0, 1.42e-5, 2, 3.0) == doctest::Approx(4.05).epsilon(1e-3));
  // sigma -> infinity drives epsilon to 0.
  CHECK(vae_ldp_epsilon(1e12, 5.25e-4, 100, 3.0) < 1e-9);
}

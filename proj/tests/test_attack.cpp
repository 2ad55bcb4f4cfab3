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

#include "vaedp/attack.hpp"
#include "vaedp/error.hpp"

using namespace vaedp;

namespace {

// Identity autoencoder with sigma = 0: encoder mean = x (weights I), log
// variance pinned very negative so exp underflows to exactly 0; decoder = I.
VaeModel identity_autoencoder(std::size_t d, Rng& rng) {
  VaeConfig cfg;
  cfg.data_dim = d;
  cfg.latent_dim = d;
  cfg.encoder_hidden = {};
  cfg.decoder_hidden = {};
  cfg.output_act = Activation::kIdentity;
  VaeModel m = make_vae(cfg, rng);
  Layer& enc = m.encoder.layers[0];
  for (double& v : enc.w.data) v = 0.0;
  for (std::size_t i = 0; i < d; ++i) enc.w.at(i, i) = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    enc.b.data[j] = 0.0;
    enc.b.data[d + j] = -1500.0;  // clamped to -30 internally; sigma ~ 3e-7
  }
  Layer& dec = m.decoder.layers[0];
  for (double& v : dec.w.data) v = 0.0;
  for (std::size_t i = 0; i < d; ++i) dec.w.at(i, i) = 1.0;
  for (double& v : dec.b.data) v = 0.0;
  return m;
}

}  // namespace

TEST_CASE("mse identities and hand case") {
  const Tensor x = Tensor::row({0.3, 0.4, 0.5});
  CHECK(mse(x, x) == 0.0);
  CHECK(mse(Tensor::row({0, 0}), Tensor::row({1, 1})) == 1.0);
  CHECK_THROWS_AS(mse(x, Tensor::row({1, 2})), ParamError);
}

TEST_CASE("ssim identities, symmetry and range") {
  Rng rng(1);
  Tensor a = Tensor::zeros({64}), b = Tensor::zeros({64});
  for (double& v : a.data) v = rng.uniform();
  for (double& v : b.data) v = rng.uniform();
  CHECK(ssim(a, a, 8, 8) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(ssim(a, b, 8, 8) - ssim(b, a, 8, 8)) <= 1e-12);
  CHECK(ssim(a, b, 8, 8) <= 1.0);
  CHECK(ssim(a, b, 8, 8) >= -1.0);
}

TEST_CASE("ssim of a 2-value pattern against its negative, evaluated by hand") {
  // x = [0,1], y = 1-x, window covers the whole 1x2 image. Population stats:
  // mu_x = mu_y = 0.5, var = 0.25, cov = -0.25, so with C1=(0.01)^2 and
  // C2=(0.03)^2 the whole expression collapses to (-0.5+C2)/(0.5+C2).
  const Tensor x = Tensor::row({0.0, 1.0});
  const Tensor y = Tensor::row({1.0, 0.0});
  const double c2 = 0.03 * 0.03;
  const double expected = (-0.5 + c2) / (0.5 + c2);
  CHECK(ssim(x, y, 1, 2) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ssim(x, y, 1, 2) < 0.0);

  // Checkerboard vs its negative: every window has the same negative score.
  Tensor cb = Tensor::zeros({64}), neg = Tensor::zeros({64});
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) {
      cb.data[r * 8 + c] = static_cast<double>((r + c) % 2);
      neg.data[r * 8 + c] = 1.0 - cb.data[r * 8 + c];
    }
  }
  CHECK(ssim(cb, neg, 8, 8) < 0.0);
}

TEST_CASE("average precision hand cases") {
  CHECK(average_precision({.9, .8, .7, .6}, {1, 1, 0, 0}) == 1.0);
  CHECK(average_precision({.9, .8, .7, .6}, {0, 1, 0, 1}) == 0.5);
  // Reversed perfect ranking on balanced data is strictly below 0.5.
  CHECK(average_precision({.9, .8, .7, .6}, {0, 0, 1, 1}) < 0.5);
  CHECK_THROWS_AS(average_precision({.9, .8}, {0, 0}), ParamError);
}

TEST_CASE("average precision tie handling groups equal scores") {
  // All scores equal: one threshold containing everything, AP = precision.
  CHECK(average_precision({.5, .5, .5, .5}, {1, 0, 1, 0}) == 0.5);
  CHECK(average_precision({.5, .5, .5}, {1, 1, 1}) == 1.0);
}

TEST_CASE("average precision is invariant under monotone score transforms") {
  Rng rng(2);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    scores.push_back(rng.normal());
    labels.push_back(rng.uniform() < 0.5 ? 1 : 0);
  }
  labels[0] = 1;
  const double base = average_precision(scores, labels);
  std::vector<double> warped;
  for (double s : scores) warped.push_back(std::exp(0.3 * s) + 7.0);
  CHECK(average_precision(warped, labels) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("random scores on balanced labels give AP near 0.5") {
  Rng rng(3);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < 10000; ++i) {
    scores.push_back(rng.normal());
    labels.push_back(i % 2);
  }
  CHECK(average_precision(scores, labels) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("reconstruction score of an identity autoencoder") {
  Rng rng(4);
  VaeModel m = identity_autoencoder(9, rng);
  const Tensor x = Tensor::row({.1, .2, .3, .4, .5, .6, .7, .8, .9});
  AttackConfig cfg;
  cfg.n_samples = 10;
  cfg.distance = DistanceKind::kMse;
  Rng score_rng(5);
  // Perfect reconstruction: -MSE = 0, the maximum possible for MSE scores.
  CHECK(reconstruction_score(m, x, cfg, score_rng) ==
        doctest::Approx(0.0).epsilon(1e-10));

  cfg.distance = DistanceKind::kSsim;
  cfg.img_rows = 3;
  cfg.img_cols = 3;
  Rng score_rng2(6);
  CHECK(reconstruction_score(m, x, cfg, score_rng2) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("monte-carlo scores at different N agree within the standard error") {
  Rng rng(7);
  VaeConfig mc;
  mc.data_dim = 6;
  mc.latent_dim = 2;
  mc.encoder_hidden = {8};
  mc.decoder_hidden = {8};
  mc.output_act = Activation::kSigmoid;
  VaeModel m = make_vae(mc, rng);
  Tensor x = Tensor::row({.2, .4, .6, .8, .5, .3});

  AttackConfig small;
  small.n_samples = 300;
  AttackConfig large;
  large.n_samples = 3000;

  // Spread of the per-draw distance, for the standard-error bound.
  Rng probe(8);
  std::vector<double> one_draw;
  for (int i = 0; i < 300; ++i) {
    AttackConfig single;
    single.n_samples = 1;
    Rng r = probe.split(i);
    one_draw.push_back(reconstruction_score(m, x, single, r));
  }
  double mean = 0.0, var = 0.0;
  for (double v : one_draw) mean += v;
  mean /= one_draw.size();
  for (double v : one_draw) var += (v - mean) * (v - mean);
  var /= one_draw.size();

  Rng ra(9), rb(10);
  const double sa = reconstruction_score(m, x, small, ra);
  const double sb = reconstruction_score(m, x, large, rb);
  const double se = std::sqrt(var / 300.0);
  CHECK(std::fabs(sa - sb) < 5.0 * se);
}

TEST_CASE("run_attack rejects overlapping splits and clamps n_per_side") {
  Rng rng(11);
  VaeModel m = identity_autoencoder(4, rng);
  Dataset train, test;
  train.features = Tensor::zeros({4, 4});
  test.features = Tensor::zeros({3, 4});
  for (int i = 0; i < 4; ++i) {
    train.labels.push_back(0);
    train.ids.push_back(i);
  }
  for (int i = 0; i < 3; ++i) {
    test.labels.push_back(0);
    test.ids.push_back(i + 2);  // ids 2,3 overlap
  }
  AttackConfig cfg;
  cfg.n_samples = 2;
  Rng arng(1);
  CHECK_THROWS_AS(run_attack(m, train, test, 2, cfg, arng), IntegrityError);

  for (int i = 0; i < 3; ++i) test.ids[i] = 100 + i;
  Rng arng2(1);
  const AttackResult r = run_attack(m, train, test, 50, cfg, arng2);
  CHECK(r.n_clamped);
  CHECK(r.n_per_side == 3);
  CHECK(r.table.size() == 6);
}

TEST_CASE("run_attack is deterministic and exports the score table") {
  Rng rng(12);
  VaeConfig mc;
  mc.data_dim = 4;
  mc.latent_dim = 2;
  mc.encoder_hidden = {6};
  mc.decoder_hidden = {6};
  VaeModel m = make_vae(mc, rng);

  auto make_set = [&](int base, int n) {
    Dataset d;
    d.features = Tensor::zeros({static_cast<std::size_t>(n), 4});
    Rng frng(base);
    for (double& v : d.features.data) v = frng.uniform();
    for (int i = 0; i < n; ++i) {
      d.labels.push_back(0);
      d.ids.push_back(base + i);
    }
    return d;
  };
  const Dataset train = make_set(0, 10);
  const Dataset test = make_set(1000, 10);
  AttackConfig cfg;
  cfg.n_samples = 5;
  Rng a1(42), a2(42);
  const AttackResult r1 = run_attack(m, train, test, 8, cfg, a1);
  const AttackResult r2 = run_attack(m, train, test, 8, cfg, a2);
  CHECK(r1.average_precision == r2.average_precision);
  REQUIRE(r1.table.size() == r2.table.size());
  for (std::size_t i = 0; i < r1.table.size(); ++i) {
    CHECK(r1.table[i].score == r2.table[i].score);
  }
  const std::string csv = score_table_csv(r1);
  CHECK(csv.rfind("record_id,score,is_member\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);  // header + 16 rows
  CHECK(r1.average_precision >= 0.0);
  CHECK(r1.average_precision <= 1.0);
}

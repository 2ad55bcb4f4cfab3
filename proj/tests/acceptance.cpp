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

// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the exit code is the number of failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vaedp/accountant.hpp"
#include "vaedp/attack.hpp"
#include "vaedp/dataset.hpp"
#include "vaedp/dp.hpp"
#include "vaedp/net.hpp"
#include "vaedp/pipeline.hpp"
#include "vaedp/rng.hpp"
#include "vaedp/tradeoff.hpp"
#include "vaedp/vae.hpp"

using namespace vaedp;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool passed, const std::string& detail) {
  std::printf("[%s] %2d. %s — %s\n", passed ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!passed) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---- 1. VAE-LDP epsilon formula --------------------------------------------

void criterion_1() {
  const double e10 = vae_ldp_epsilon(10.0, 5.25e-4, 100, 3.0);
  const double e1 = vae_ldp_epsilon(1.0, 5.25e-4, 100, 3.0);
  const bool ok = std::fabs(e10 - 23.66) <= 0.01 && std::fabs(e1 - 236.61) <= 0.01;
  report(1, "VAE-LDP epsilon reproduces the reference pairs", ok,
         "sigma=10 -> " + fmt(e10) + " (want 23.66 +- 0.01), sigma=1 -> " + fmt(e1) +
             " (want 236.61 +- 0.01)");
}

// ---- 2. RDP accountant ------------------------------------------------------

void criterion_2() {
  // q = 1 closed form to 1e-12 across the grid and several step counts.
  bool closed_ok = true;
  double worst = 0.0;
  for (const double z : {0.5, 1.0, 2.0}) {
    RdpAccountant acct(1.0, z);
    std::uint64_t t = 0;
    for (const std::uint64_t chunk : {1ull, 9ull, 490ull}) {
      acct.accumulate_step(chunk);
      t += chunk;
      for (std::size_t i = 0; i < acct.orders().size(); ++i) {
        const double expect =
            acct.orders()[i] / (2.0 * z * z) * static_cast<double>(t);
        const double err = std::fabs(acct.eps_rdp()[i] - expect) /
                           std::max(1.0, std::fabs(expect));
        worst = std::max(worst, err);
        closed_ok = closed_ok && err <= 1e-12;
      }
    }
  }

  // Subsampled configuration from the reference table: 1000 epochs at batch
  // 32 over 7061 records, delta = 1.42e-4.
  RdpAccountant sub(32.0 / 7061.0, 1.0);
  sub.accumulate_step(1000 * ((7061 + 31) / 32));
  const double eps = sub.to_eps_delta(1.42e-4).epsilon;
  const bool sub_ok = eps >= 15.73 * 0.75 && eps <= 15.73 * 1.25;

  report(2, "RDP accountant: closed form to 1e-12, reference config within 25%",
         closed_ok && sub_ok,
         "q=1 worst rel err " + fmt(worst) + "; subsampled eps " + fmt(eps) +
             " vs 15.73 (+-25%)");
}

// ---- 3. Gradient correctness ------------------------------------------------

void criterion_3() {
  Rng rng(301);
  bool ok = true;
  double worst = 0.0;
  const double h = 1e-5;
  const std::vector<Activation> acts = {Activation::kRelu, Activation::kLeakyRelu,
                                        Activation::kTanh, Activation::kSigmoid,
                                        Activation::kSoftmax};

  // 10 plain dense nets under a fixed random linear loss.
  for (int trial = 0; trial < 10; ++trial) {
    Rng net_rng = rng.split("net").split(trial);
    DenseNet net = make_dense_net(4, {6, 5}, 3, Activation::kTanh,
                                  acts[trial % acts.size()], net_rng);
    Tensor x = Tensor::zeros({2, 4});
    for (double& v : x.data) v = net_rng.normal();
    Tensor dout = Tensor::zeros({2, 3});
    for (double& v : dout.data) v = net_rng.normal();

    ForwardTrace trace;
    forward(net, x, trace);
    const ParamGrads grads = backward(net, trace, dout);
    std::vector<Tensor*> params = net_params(net);
    std::vector<const Tensor*> analytic;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
      analytic.push_back(&grads.dw[li]);
      analytic.push_back(&grads.db[li]);
    }
    auto loss = [&]() {
      const Tensor out = forward(net, x);
      double l = 0.0;
      for (std::size_t i = 0; i < out.numel(); ++i) l += dout.data[i] * out.data[i];
      return l;
    };
    for (int probe = 0; probe < 10; ++probe) {
      const std::size_t block = net_rng.next_u64() % params.size();
      const std::size_t idx = net_rng.next_u64() % params[block]->numel();
      const double saved = params[block]->data[idx];
      params[block]->data[idx] = saved + h;
      const double up = loss();
      params[block]->data[idx] = saved - h;
      const double down = loss();
      params[block]->data[idx] = saved;
      const double numeric = (up - down) / (2 * h);
      const double exact = analytic[block]->data[idx];
      const double rel = std::fabs(numeric - exact) /
                         std::max({std::fabs(numeric), std::fabs(exact), 1e-8});
      worst = std::max(worst, rel);
      ok = ok && rel < 1e-4;
    }
  }

  // 10 VAE models through the reparameterization path with fixed eta.
  for (int trial = 0; trial < 10; ++trial) {
    Rng net_rng = rng.split("vae").split(trial);
    VaeConfig cfg;
    cfg.data_dim = 5;
    cfg.latent_dim = 3;
    cfg.encoder_hidden = {7};
    cfg.decoder_hidden = {6};
    cfg.output_act = Activation::kSigmoid;
    cfg.weights = {0.3, 2.0, trial % 2 ? 0.5 : 0.0};
    if (trial % 2) cfg.class_count = 3;
    if (trial % 3 == 0) {
      cfg.mode = VaeMode::kVaeLdp;
      cfg.noise_bound = 0.2;
    }
    VaeModel m = make_vae(cfg, net_rng);
    Tensor x = Tensor::zeros({1, 5});
    for (double& v : x.data) v = net_rng.uniform();
    Tensor eta = Tensor::zeros({3});
    for (double& v : eta.data) v = net_rng.normal();
    const int label = trial % 2 ? 1 : -1;

    const VaeExampleGrads g = vae_example_grads(m, x, label, eta);
    std::vector<Tensor*> params = m.params();
    for (int probe = 0; probe < 10; ++probe) {
      const std::size_t block = net_rng.next_u64() % params.size();
      const std::size_t idx = net_rng.next_u64() % params[block]->numel();
      const double saved = params[block]->data[idx];
      params[block]->data[idx] = saved + h;
      const double up = vae_example_grads(m, x, label, eta).loss.total;
      params[block]->data[idx] = saved - h;
      const double down = vae_example_grads(m, x, label, eta).loss.total;
      params[block]->data[idx] = saved;
      const double numeric = (up - down) / (2 * h);
      const double exact = g.grads[block].data[idx];
      const double rel = std::fabs(numeric - exact) /
                         std::max({std::fabs(numeric), std::fabs(exact), 1e-6});
      worst = std::max(worst, rel);
      ok = ok && rel < 1e-4;
    }
  }
  report(3, "analytic gradients match finite differences (20 nets x 10 coords)", ok,
         "worst relative error " + fmt(worst) + " (limit 1e-4)");
}

// ---- helpers for the training criteria --------------------------------------

Dataset attack_style_dataset(std::size_t records, std::uint64_t seed, double noise) {
  BlobImagesSpec spec;
  spec.classes = 4;
  spec.records = records;
  spec.rows = 8;
  spec.cols = 8;
  spec.noise = noise;
  Rng rng = Rng(seed).split("dataset");
  return synth_blob_images(spec, rng);
}

VaeConfig overfit_model_config(std::size_t data_dim) {
  VaeConfig cfg;
  cfg.data_dim = data_dim;
  cfg.latent_dim = 8;
  cfg.encoder_hidden = {32};
  cfg.decoder_hidden = {32};
  cfg.output_act = Activation::kSigmoid;
  cfg.weights = {0.01, 50.0, 0.0};
  return cfg;
}

// ---- 4. DP-Adam degeneracy --------------------------------------------------

void criterion_4() {
  const Dataset train = attack_style_dataset(20, 41, 0.2);
  const Dataset val = attack_style_dataset(8, 42, 0.2);
  VaeConfig cfg = overfit_model_config(train.dim());

  Rng ma(7), mb(7);
  VaeModel plain = make_vae(cfg, ma);
  VaeModel dp = make_vae(cfg, mb);

  VaeTrainConfig tc;
  tc.epochs = 10;  // 10 epochs x ceil(20/10) = 20 steps
  tc.batch_size = 10;
  VaeTrainConfig dp_tc = tc;
  dp_tc.dp = DpTrainConfig{std::numeric_limits<double>::infinity(), 0.0};

  Rng ta(99), tb(99);
  const VaeTrainLog la = train_vae(plain, train, val, tc, nullptr, ta);
  const VaeTrainLog lb = train_vae(dp, train, val, dp_tc, nullptr, tb);

  bool identical = la.steps == 20 && lb.steps == 20;
  const auto pa = plain.params();
  const auto pb = dp.params();
  for (std::size_t i = 0; i < pa.size() && identical; ++i) {
    identical = pa[i]->data == pb[i]->data;
  }
  report(4, "z=0, C=inf DP trajectory is bit-identical to non-DP over 20 steps",
         identical, identical ? "all parameter blocks equal bit for bit"
                              : "trajectories diverged");
}

// ---- 5. Clipping invariant --------------------------------------------------

void criterion_5() {
  const Dataset train = attack_style_dataset(25, 51, 0.2);
  const Dataset val = attack_style_dataset(10, 52, 0.2);
  VaeConfig cfg = overfit_model_config(train.dim());
  Rng m_rng(5);
  VaeModel model = make_vae(cfg, m_rng);

  const double c = 0.05;
  VaeTrainConfig tc;
  tc.epochs = 200;  // 200 x ceil(25/5) = 1000 steps
  tc.batch_size = 5;
  tc.dp = DpTrainConfig{c, 0.5};
  tc.record_clipped_norms = true;
  Rng t_rng(6);
  const VaeTrainLog log = train_vae(model, train, val, tc, nullptr, t_rng);

  double worst = 0.0;
  for (double n : log.clipped_norms) worst = std::max(worst, n);
  const bool ok = log.steps == 1000 && !log.clipped_norms.empty() &&
                  worst <= c + 1e-12;
  report(5, "every per-example clipped norm over a 1000-step DP run is <= C + 1e-12",
         ok,
         fmt(static_cast<double>(log.clipped_norms.size())) +
             " recorded norms, max " + fmt(worst) + " vs C=" + fmt(c));
}

// ---- 6. Eq. 1 / Eq. 2 oracles ------------------------------------------------

void criterion_6() {
  const bool ap_perfect = average_precision({.9, .8, .7, .6}, {1, 1, 0, 0}) == 1.0;
  const bool ap_half = average_precision({.9, .8, .7, .6}, {0, 1, 0, 1}) == 0.5;

  PhiInputs in;
  in.atk_orig = 1.0;
  in.atk_eps = 0.75;
  in.acc_orig = 0.78;
  in.acc_eps = 0.52;
  in.acc_base = 0.05;
  in.atk_base = 0.5;
  const double hand = (0.25 * 0.73) / (0.26 * 0.5);  // 1.4038..., printed 1.404
  const bool phi_hand = std::fabs(phi(in) - hand) <= 1e-9;

  Rng rng(61);
  bool phi_range = true;
  for (int i = 0; i < 100000; ++i) {
    PhiInputs r;
    r.atk_orig = rng.uniform();
    r.atk_eps = rng.uniform();
    r.atk_base = 0.5;
    r.acc_orig = rng.uniform();
    r.acc_eps = rng.uniform();
    r.acc_base = rng.uniform();
    const double v = phi(r);
    phi_range = phi_range && v >= 0.0 && v <= 2.0;
  }
  report(6, "AP hand cases exact; phi hand case to 1e-9; phi in [0,2] on 1e5 inputs",
         ap_perfect && ap_half && phi_hand && phi_range,
         "AP {1.0, 0.5}; phi " + fmt(phi(in)) + " vs " + fmt(hand));
}

// ---- 7. SSIM / MSE -----------------------------------------------------------

void criterion_7() {
  Rng rng(71);
  Tensor a = Tensor::zeros({64}), b = Tensor::zeros({64});
  for (double& v : a.data) v = rng.uniform();
  for (double& v : b.data) v = rng.uniform();
  const bool ssim_id = std::fabs(ssim(a, a, 8, 8) - 1.0) <= 1e-12;
  const bool ssim_sym = std::fabs(ssim(a, b, 8, 8) - ssim(b, a, 8, 8)) <= 1e-12;
  const bool mse_ok = mse(a, a) == 0.0 &&
                      mse(Tensor::row({0, 0}), Tensor::row({1, 1})) == 1.0;
  report(7, "ssim(x,x)=1, ssim symmetry to 1e-12, mse hand cases exact",
         ssim_id && ssim_sym && mse_ok,
         "ssim(a,a)=" + fmt(ssim(a, a, 8, 8)) +
             ", |ssim(a,b)-ssim(b,a)|=" + fmt(std::fabs(ssim(a, b, 8, 8) - ssim(b, a, 8, 8))));
}

// ---- 8. Attack sanity --------------------------------------------------------

void criterion_8() {
  // Deliberately overfit: 20 records, long training, no DP.
  const Dataset train = attack_style_dataset(20, 81, 0.25);
  Dataset test = attack_style_dataset(20, 82, 0.25);
  for (auto& id : test.ids) id += 1000;  // distinct record ids
  VaeConfig cfg = overfit_model_config(train.dim());
  Rng m_rng(8);
  VaeModel model = make_vae(cfg, m_rng);
  VaeTrainConfig tc;
  tc.epochs = 2000;
  tc.batch_size = 20;
  tc.adam.learning_rate = 1e-3;
  Rng t_rng(9);
  train_vae(model, train, test, tc, nullptr, t_rng);

  AttackConfig atk;
  atk.n_samples = 100;
  atk.distance = DistanceKind::kMse;
  Rng a_rng(10);
  const double ap_overfit =
      run_attack(model, train, test, 20, atk, a_rng).average_precision;

  // Untrained model on 2000 balanced records.
  const Dataset big_train = attack_style_dataset(1000, 83, 0.25);
  Dataset big_test = attack_style_dataset(1000, 84, 0.25);
  for (auto& id : big_test.ids) id += 1'000'000;
  Rng u_rng(11);
  VaeModel untrained = make_vae(cfg, u_rng);
  AttackConfig atk_small = atk;
  atk_small.n_samples = 10;
  Rng a2_rng(12);
  const double ap_untrained =
      run_attack(untrained, big_train, big_test, 1000, atk_small, a2_rng)
          .average_precision;

  const bool ok = ap_overfit >= 0.9 && ap_untrained >= 0.45 && ap_untrained <= 0.55;
  report(8, "overfit VAE: AP >= 0.9; untrained model: AP in [0.45, 0.55]", ok,
         "overfit AP " + fmt(ap_overfit) + ", untrained AP " + fmt(ap_untrained));
}

// ---- 9. Qualitative CDP trend ------------------------------------------------

json trend_config(std::uint64_t seed) {
  json j;
  j["dataset"] = {{"synthetic",
                   {{"kind", "blob-images"}, {"classes", 4}, {"records", 80},
                    {"rows", 8}, {"cols", 8}, {"noise", 0.25}}}};
  j["split"] = {{"train", 0.5}, {"val", 0.2}, {"test", 0.3}};
  j["dp_setting"] = {{"kind", "cdp"}, {"heuristic_epochs", 10}};
  j["sweep"] = {0.0, 1.0};
  j["model"] = {{"latent_dim", 8},
                {"encoder_hidden", {32}},
                {"decoder_hidden", {32}},
                {"epochs", 400},
                {"batch_size", 20},
                {"learning_rate", 1e-3},
                {"loss_weights", {{"kl", 0.01}, {"rec", 50.0}, {"cls", 0.0}}}};
  j["classifier"] = {{"hidden", {24}}, {"epochs", 60}, {"patience", 10}};
  j["attack"] = {{"n_per_side", 24}, {"samples", 50}, {"distance", "mse"}};
  j["seed"] = seed;
  return j;
}

void criterion_9() {
  std::vector<double> ap0, ap1, acc0, acc1;
  for (std::uint64_t seed : {901ull, 902ull, 903ull}) {
    const ExperimentConfig cfg = parse_experiment_config(trend_config(seed));
    const TradeoffReport rep = run_sweep(cfg);
    if (rep.rows.size() != 2 || !rep.rows[0].error.empty() ||
        !rep.rows[1].error.empty()) {
      report(9, "CDP trend: median AP and accuracy drop from z=0 to z=1", false,
             "a sweep point failed");
      return;
    }
    ap0.push_back(rep.rows[0].ap);
    ap1.push_back(rep.rows[1].ap);
    acc0.push_back(rep.rows[0].acc);
    acc1.push_back(rep.rows[1].acc);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double m_ap0 = median(ap0), m_ap1 = median(ap1);
  const double m_acc0 = median(acc0), m_acc1 = median(acc1);
  const bool ok = m_ap1 < m_ap0 && m_acc1 < m_acc0;
  report(9, "CDP trend over 3 seeds: median AP and accuracy drop from z=0 to z=1",
         ok,
         "AP " + fmt(m_ap0) + " -> " + fmt(m_ap1) + "; acc " + fmt(m_acc0) + " -> " +
             fmt(m_acc1));
}

// ---- 10. Mechanism distribution checks ---------------------------------------

void criterion_10() {
  Rng g(1001);
  const std::size_t n = 1'000'000;
  double s = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.normal();
    s += x;
    ss += x * x;
  }
  const double g_mean = s / n;
  const double g_var = ss / n - g_mean * g_mean;
  const bool gauss_ok = std::fabs(g_mean) <= 0.01 && std::fabs(g_var - 1.0) <= 0.02;

  Rng l(1002);
  s = ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = l.laplace(2.0);
    s += x;
    ss += x * x;
  }
  const double l_mean = s / n;
  const double l_var = ss / n - l_mean * l_mean;
  const bool lap_ok = std::fabs(l_var - 8.0) / 8.0 <= 0.05;

  Rng d1(1003), d2(1003);
  bool det_ok = true;
  for (int i = 0; i < 1000; ++i) det_ok = det_ok && d1.normal() == d2.normal();

  // Scalar Laplace mechanism likelihood-ratio check: inputs 0 and 1 with
  // sensitivity 1, eps 1; 50 bins on [-4, 5]; cap e^eps * 1.1.
  const int bins = 50;
  const double lo = -4.0, hi = 5.0;
  std::vector<double> c0(bins, 0.0), c1(bins, 0.0);
  Rng mech(1004);
  auto bin_of = [&](double x) {
    return std::clamp(static_cast<int>((x - lo) / (hi - lo) * bins), 0, bins - 1);
  };
  for (std::size_t i = 0; i < n; ++i) c0[bin_of(0.0 + mech.laplace(1.0))] += 1;
  for (std::size_t i = 0; i < n; ++i) c1[bin_of(1.0 + mech.laplace(1.0))] += 1;
  double worst_ratio = 0.0;
  bool lr_ok = true;
  for (int b = 0; b < bins; ++b) {
    if (c0[b] == 0 || c1[b] == 0) {
      lr_ok = false;
      continue;
    }
    const double r = std::max(c0[b] / c1[b], c1[b] / c0[b]);
    worst_ratio = std::max(worst_ratio, r);
    lr_ok = lr_ok && r <= std::exp(1.0) * 1.1;
  }

  report(10, "mechanism distributions: moments, determinism, e^eps ratio",
         gauss_ok && lap_ok && det_ok && lr_ok,
         "gauss mean " + fmt(g_mean) + " var " + fmt(g_var) + "; laplace var " +
             fmt(l_var) + "; worst LR " + fmt(worst_ratio) + " vs cap " +
             fmt(std::exp(1.0) * 1.1));
}

// ---- 11. End-to-end determinism -----------------------------------------------

void criterion_11() {
  json j;
  j["dataset"] = {{"synthetic",
                   {{"kind", "blob-images"}, {"classes", 3}, {"records", 60},
                    {"rows", 8}, {"cols", 8}, {"noise", 0.15}}}};
  j["split"] = {{"train", 0.5}, {"val", 0.2}, {"test", 0.3}};
  j["dp_setting"] = {{"kind", "cdp"}, {"clipping_norm", 0.1}};
  j["sweep"] = {0.5, 1.0};
  j["model"] = {{"latent_dim", 4}, {"encoder_hidden", {16}},
                {"decoder_hidden", {16}}, {"epochs", 10}, {"batch_size", 16},
                {"loss_weights", {{"kl", 0.05}, {"rec", 20.0}, {"cls", 0.0}}}};
  j["classifier"] = {{"hidden", {16}}, {"epochs", 20}, {"patience", 5}};
  j["attack"] = {{"n_per_side", 15}, {"samples", 15}};
  j["seed"] = 2026;
  const ExperimentConfig cfg = parse_experiment_config(j);

  const std::string dir_a = "/tmp/vaedp_accept_a", dir_b = "/tmp/vaedp_accept_b";
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  emit_report(run_sweep(cfg), dir_a);
  emit_report(run_sweep(cfg), dir_b);

  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(dir_a + "/report.json");
  const std::string b = slurp(dir_b + "/report.json");
  const bool ok = !a.empty() && a == b;
  report(11, "sweep run twice with the same config+seed: byte-identical report.json",
         ok, ok ? fmt(static_cast<double>(a.size())) + " bytes, equal" : "reports differ");
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

}  // namespace

int main() {
  std::printf("vaedp acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "SUCCESS" : "FAILURE",
              g_failures);
  return g_failures;
}

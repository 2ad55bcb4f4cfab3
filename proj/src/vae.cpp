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

#include "vaedp/vae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vaedp/checkpoint.hpp"
#include "vaedp/dp.hpp"
#include "vaedp/error.hpp"

namespace vaedp {
namespace {

// Keeps exp(0.5 * logvar) finite in both directions.
constexpr double kLogVarClamp = 30.0;

Tensor as_batch(const Tensor& x) {
  if (x.shape.size() == 1) {
    Tensor t = x;
    t.shape = {1, x.shape[0]};
    return t;
  }
  return x;
}

struct ModeTransform {
  Tensor mu;        // effective mean
  Tensor sigma;     // effective std
  Tensor mu_raw;    // encoder outputs, retained for the backward pass
  Tensor logvar;    // clamped raw log-variance
};

ModeTransform apply_mode(const VaeConfig& cfg, const Tensor& enc_out) {
  const std::size_t batch = enc_out.rows();
  const std::size_t d = cfg.latent_dim;
  if (enc_out.cols() != 2 * d) {
    throw ConfigError("encoder output must be 2*latent_dim wide");
  }
  ModeTransform t;
  t.mu = Tensor::zeros({batch, d});
  t.sigma = Tensor::zeros({batch, d});
  t.mu_raw = Tensor::zeros({batch, d});
  t.logvar = Tensor::zeros({batch, d});
  for (std::size_t r = 0; r < batch; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      const double mu_raw = enc_out.at(r, j);
      const double lv = std::clamp(enc_out.at(r, d + j), -kLogVarClamp, kLogVarClamp);
      const double v = std::exp(0.5 * lv);
      t.mu_raw.at(r, j) = mu_raw;
      t.logvar.at(r, j) = lv;
      if (cfg.mode == VaeMode::kVaeLdp) {
        t.mu.at(r, j) = cfg.mean_bound * std::tanh(mu_raw);
        t.sigma.at(r, j) = std::max(cfg.noise_bound, v);
      } else {
        t.mu.at(r, j) = mu_raw;
        t.sigma.at(r, j) = v;
      }
    }
  }
  return t;
}

// KL of one row against N(0, I) from effective (mu, sigma).
double kl_row(const double* mu, const double* sigma, std::size_t d) {
  double kl = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double s2 = sigma[j] * sigma[j];
    kl += 0.5 * (s2 + mu[j] * mu[j] - 1.0 - std::log(s2));
  }
  return kl;
}

}  // namespace

std::vector<Tensor*> VaeModel::params() {
  std::vector<Tensor*> out = net_params(encoder);
  for (Tensor* t : net_params(decoder)) out.push_back(t);
  if (has_head()) {
    for (Tensor* t : net_params(head)) out.push_back(t);
  }
  return out;
}

std::vector<const Tensor*> VaeModel::params() const {
  std::vector<const Tensor*> out = net_params(encoder);
  for (const Tensor* t : net_params(decoder)) out.push_back(t);
  if (has_head()) {
    for (const Tensor* t : net_params(head)) out.push_back(t);
  }
  return out;
}

std::vector<std::string> VaeModel::param_names() const {
  std::vector<std::string> out = net_param_names(encoder, "enc");
  for (auto& n : net_param_names(decoder, "dec")) out.push_back(n);
  if (has_head()) {
    for (auto& n : net_param_names(head, "head")) out.push_back(n);
  }
  return out;
}

VaeModel make_vae(const VaeConfig& config, Rng& rng) {
  if (config.data_dim == 0 || config.latent_dim == 0) {
    throw ConfigError("vae: data_dim and latent_dim must be positive");
  }
  if (config.mode == VaeMode::kVaeLdp && config.mean_bound <= 0.0) {
    throw ConfigError("vae_ldp mode needs a positive mean bound");
  }
  VaeModel m;
  m.config = config;
  m.init_seed = rng.seed();
  Rng enc_rng = rng.split("enc_init");
  Rng dec_rng = rng.split("dec_init");
  m.encoder = make_dense_net(config.data_dim, config.encoder_hidden,
                             2 * config.latent_dim, config.hidden_act,
                             Activation::kIdentity, enc_rng, config.leaky_slope);
  m.decoder = make_dense_net(config.latent_dim, config.decoder_hidden, config.data_dim,
                             config.hidden_act, config.output_act, dec_rng,
                             config.leaky_slope);
  if (config.class_count > 0) {
    Rng head_rng = rng.split("head_init");
    m.head = make_dense_net(config.latent_dim, {}, config.class_count,
                            config.hidden_act, Activation::kSoftmax, head_rng,
                            config.leaky_slope);
  }
  return m;
}

PosteriorParams encode_params(const VaeModel& model, const Tensor& x) {
  const Tensor out = forward(model.encoder, as_batch(x));
  ModeTransform t = apply_mode(model.config, out);
  t.mu.check_finite("encoder mean");
  t.sigma.check_finite("encoder std");
  return {std::move(t.mu), std::move(t.sigma)};
}

Encoding encode(const VaeModel& model, const Tensor& x, Rng& rng) {
  PosteriorParams p = encode_params(model, x);
  Encoding e;
  e.z = Tensor::zeros(p.mu.shape);
  for (std::size_t i = 0; i < e.z.numel(); ++i) {
    e.z.data[i] = p.mu.data[i] + p.sigma.data[i] * rng.normal();
  }
  e.mu = std::move(p.mu);
  e.sigma = std::move(p.sigma);
  return e;
}

Tensor decode(const VaeModel& model, const Tensor& z) {
  return forward(model.decoder, as_batch(z));
}

double kl_divergence(const Tensor& mu, const Tensor& log_var) {
  if (!same_shape(mu, log_var)) throw ParamError("kl: shape mismatch");
  const Tensor mb = as_batch(mu), lb = as_batch(log_var);
  const std::size_t batch = mb.rows(), d = mb.cols();
  double total = 0.0;
  for (std::size_t r = 0; r < batch; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      const double s2 = std::exp(lb.at(r, j));
      total += 0.5 * (s2 + mb.at(r, j) * mb.at(r, j) - 1.0 - lb.at(r, j));
    }
  }
  return total / static_cast<double>(batch);
}

VaeExampleGrads vae_example_grads(const VaeModel& model, const Tensor& x, int label,
                                  const Tensor& eta) {
  const VaeConfig& cfg = model.config;
  const Tensor xb = as_batch(x);
  if (xb.rows() != 1) throw ParamError("vae_example_grads expects a single example");
  if (eta.numel() != cfg.latent_dim) throw ParamError("eta must have latent_dim entries");
  const std::size_t d = cfg.latent_dim;
  const std::size_t data_dim = cfg.data_dim;
  const LossWeights& w = cfg.weights;

  ForwardTrace enc_trace;
  const Tensor enc_out = forward(model.encoder, xb, enc_trace);
  ModeTransform t = apply_mode(cfg, enc_out);

  Tensor z = Tensor::zeros({1, d});
  for (std::size_t j = 0; j < d; ++j) {
    z.data[j] = t.mu.data[j] + t.sigma.data[j] * eta.data[j];
  }

  ForwardTrace dec_trace;
  const Tensor xhat = forward(model.decoder, z, dec_trace);

  VaeExampleGrads out;
  // Reconstruction: mean squared element difference.
  double rec = 0.0;
  for (std::size_t i = 0; i < data_dim; ++i) {
    const double diff = xhat.data[i] - xb.data[i];
    rec += diff * diff;
  }
  rec /= static_cast<double>(data_dim);
  out.loss.reconstruction = rec;
  out.loss.kl = kl_row(t.mu.data.data(), t.sigma.data.data(), d);

  const bool use_head = model.has_head() && label >= 0 && w.cls != 0.0;
  ForwardTrace head_trace;
  Tensor probs;
  if (use_head) {
    if (label >= static_cast<int>(cfg.class_count)) {
      throw ParamError("label out of range for classifier head");
    }
    probs = forward(model.head, t.mu, head_trace);
    out.loss.classifier = -std::log(std::max(probs.data[label], 1e-300));
  }
  out.loss.total = w.kl * out.loss.kl + w.rec * out.loss.reconstruction +
                   w.cls * out.loss.classifier;

  // ---- Backward ----
  Tensor dxhat = Tensor::zeros({1, data_dim});
  const double rec_scale = w.rec * 2.0 / static_cast<double>(data_dim);
  for (std::size_t i = 0; i < data_dim; ++i) {
    dxhat.data[i] = rec_scale * (xhat.data[i] - xb.data[i]);
  }
  ParamGrads dec_grads = backward(model.decoder, dec_trace, dxhat);

  // d total / d mu and d total / d sigma (effective values).
  Tensor dmu = dec_grads.dx;  // z = mu + sigma*eta: identity path
  Tensor dsigma = Tensor::zeros({1, d});
  for (std::size_t j = 0; j < d; ++j) {
    dsigma.data[j] = dec_grads.dx.data[j] * eta.data[j];
    dmu.data[j] += w.kl * t.mu.data[j];
    dsigma.data[j] += w.kl * (t.sigma.data[j] - 1.0 / t.sigma.data[j]);
  }

  ParamGrads head_grads;
  if (use_head) {
    Tensor dprobs = Tensor::zeros({1, cfg.class_count});
    dprobs.data[label] = -w.cls / std::max(probs.data[label], 1e-12);
    head_grads = backward(model.head, head_trace, dprobs);
    for (std::size_t j = 0; j < d; ++j) dmu.data[j] += head_grads.dx.data[j];
  }

  // Back through the mode transform to the raw encoder outputs.
  Tensor denc = Tensor::zeros({1, 2 * d});
  for (std::size_t j = 0; j < d; ++j) {
    double dmu_raw = dmu.data[j];
    if (cfg.mode == VaeMode::kVaeLdp) {
      const double th = std::tanh(t.mu_raw.data[j]);
      dmu_raw *= cfg.mean_bound * (1.0 - th * th);
    }
    denc.data[j] = dmu_raw;

    const double v = std::exp(0.5 * t.logvar.data[j]);
    double dlv = 0.0;
    const bool lv_interior = std::fabs(t.logvar.data[j]) < kLogVarClamp;
    const bool floor_inactive = cfg.mode != VaeMode::kVaeLdp || v > cfg.noise_bound;
    if (lv_interior && floor_inactive) dlv = dsigma.data[j] * 0.5 * v;
    denc.data[d + j] = dlv;
  }
  ParamGrads enc_grads = backward(model.encoder, enc_trace, denc);

  for (std::size_t li = 0; li < model.encoder.layers.size(); ++li) {
    out.grads.push_back(std::move(enc_grads.dw[li]));
    out.grads.push_back(std::move(enc_grads.db[li]));
  }
  for (std::size_t li = 0; li < model.decoder.layers.size(); ++li) {
    out.grads.push_back(std::move(dec_grads.dw[li]));
    out.grads.push_back(std::move(dec_grads.db[li]));
  }
  if (model.has_head()) {
    if (use_head) {
      for (std::size_t li = 0; li < model.head.layers.size(); ++li) {
        out.grads.push_back(std::move(head_grads.dw[li]));
        out.grads.push_back(std::move(head_grads.db[li]));
      }
    } else {
      for (const Layer& l : model.head.layers) {
        out.grads.push_back(Tensor::zeros(l.w.shape));
        out.grads.push_back(Tensor::zeros(l.b.shape));
      }
    }
  }
  return out;
}

VaeLossValue evaluate_vae_loss(const VaeModel& model, const Dataset& data) {
  if (data.size() == 0) throw ParamError("evaluate_vae_loss: empty dataset");
  const std::size_t n = data.size();
  const std::size_t d = model.config.latent_dim;
  PosteriorParams p = encode_params(model, data.features);
  const Tensor xhat = decode(model, p.mu);  // eta = 0
  const LossWeights& w = model.config.weights;

  VaeLossValue v;
  double rec = 0.0;
  for (std::size_t i = 0; i < xhat.numel(); ++i) {
    const double diff = xhat.data[i] - data.features.data[i];
    rec += diff * diff;
  }
  v.reconstruction = rec / static_cast<double>(xhat.numel());

  double kl = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    kl += kl_row(p.mu.data.data() + r * d, p.sigma.data.data() + r * d, d);
  }
  v.kl = kl / static_cast<double>(n);

  if (model.has_head() && data.labeled() && w.cls != 0.0) {
    const Tensor probs = forward(model.head, p.mu);
    double ce = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      ce += -std::log(std::max(probs.at(r, data.labels[r]), 1e-300));
    }
    v.classifier = ce / static_cast<double>(n);
  }
  v.total = w.kl * v.kl + w.rec * v.reconstruction + w.cls * v.classifier;
  return v;
}

VaeTrainLog train_vae(VaeModel& model, const Dataset& train, const Dataset& val,
                      const VaeTrainConfig& config, RdpAccountant* accountant,
                      Rng& rng) {
  if (train.size() == 0) throw ParamError("train_vae: empty training set");
  if (train.dim() != model.config.data_dim) {
    throw ConfigError("train_vae: dataset dim does not match the model");
  }
  if (config.dp && !(config.dp->clipping_norm > 0.0)) {
    throw ConfigError("train_vae: DP clipping norm must be positive");
  }

  const std::size_t n = train.size();
  const std::size_t batch = std::max<std::size_t>(1, std::min(config.batch_size, n));
  const std::size_t d = model.config.latent_dim;

  std::vector<Tensor*> params = model.params();
  std::vector<const Tensor*> cparams(params.begin(), params.end());
  AdamState adam(config.adam, cparams, model.param_names());

  Rng shuffle_root = rng.split("shuffle");
  Rng eta_root = rng.split("eta");
  Rng dp_root = rng.split("dp_noise");

  VaeTrainLog log;
  std::size_t collapse_run = 0;
  double prev_val_rec = std::numeric_limits<double>::infinity();
  std::uint64_t global_step = 0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng shuffle_rng = shuffle_root.split(epoch);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = shuffle_rng.next_u64() % i;
      std::swap(order[i - 1], order[j]);
    }
    Rng eta_epoch = eta_root.split(epoch);

    double epoch_loss = 0.0, epoch_rec = 0.0, epoch_kl = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      std::vector<std::vector<Tensor>> per_example;
      per_example.reserve(stop - start);
      for (std::size_t bi = start; bi < stop; ++bi) {
        const std::size_t idx = order[bi];
        Rng eta_rng = eta_epoch.split(static_cast<std::uint64_t>(train.ids[idx]));
        Tensor eta = Tensor::zeros({d});
        for (double& e : eta.data) e = eta_rng.normal();
        VaeExampleGrads g = vae_example_grads(model, train.features.row_copy(idx),
                                              train.labels[idx], eta);
        epoch_loss += g.loss.total;
        epoch_rec += g.loss.reconstruction;
        epoch_kl += g.loss.kl;
        if (config.record_preclip_norms) {
          log.preclip_norms.push_back(global_l2_norm(g.grads));
        }
        per_example.push_back(std::move(g.grads));
      }

      std::vector<Tensor> grad;
      if (config.dp) {
        Rng noise_rng = dp_root.split(global_step);
        grad = dp_gradient(per_example, config.dp->clipping_norm,
                           config.dp->noise_multiplier, noise_rng,
                           config.record_clipped_norms ? &log.clipped_norms : nullptr);
        if (accountant) accountant->accumulate_step(1);
      } else {
        Rng unused(0);
        grad = dp_gradient(per_example, std::numeric_limits<double>::infinity(), 0.0,
                           unused);
      }
      adam.step(params, grad);
      global_step += 1;
    }

    VaeEpochStats stats;
    stats.train_loss = epoch_loss / static_cast<double>(n);
    stats.train_rec = epoch_rec / static_cast<double>(n);
    stats.train_kl = epoch_kl / static_cast<double>(n);
    if (val.size() > 0) {
      const VaeLossValue vl = evaluate_vae_loss(model, val);
      stats.val_loss = vl.total;
      stats.val_rec = vl.reconstruction;
    }
    log.epochs.push_back(stats);

    // Posterior-collapse detector: flat-or-rising validation reconstruction
    // together with near-zero KL, sustained over the patience window.
    if (val.size() > 0) {
      const double slack =
          config.collapse_rec_tolerance * std::max(1.0, std::fabs(prev_val_rec));
      if (stats.val_rec >= prev_val_rec - slack &&
          stats.train_kl < config.collapse_kl_threshold) {
        collapse_run += 1;
        if (collapse_run >= config.collapse_patience && !log.posterior_collapse) {
          log.posterior_collapse = true;
          log.collapse_epoch = epoch;
        }
      } else {
        collapse_run = 0;
      }
      prev_val_rec = stats.val_rec;
    }
  }
  log.steps = global_step;
  model.trained_steps += global_step;
  return log;
}

Tensor generate_prior(const VaeModel& model, std::size_t n, Rng& rng) {
  Tensor z = Tensor::zeros({n, model.config.latent_dim});
  for (double& v : z.data) v = rng.normal();
  if (n == 0) return Tensor::zeros({0, model.config.data_dim});
  return decode(model, z);
}

Tensor generate_conditional(const VaeModel& model, const Dataset& reference,
                            int label, std::size_t n, Rng& rng) {
  if (label < 0 || (model.config.class_count > 0 &&
                    label >= static_cast<int>(model.config.class_count))) {
    throw ParamError("generate_conditional: label out of range");
  }
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference.labels[i] == label) pool.push_back(i);
  }
  if (pool.empty()) {
    throw ParamError("generate_conditional: no reference records with label " +
                     std::to_string(label));
  }
  if (n == 0) return Tensor::zeros({0, model.config.data_dim});

  const std::size_t d = model.config.latent_dim;
  Tensor z = Tensor::zeros({n, d});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t idx = pool[rng.next_u64() % pool.size()];
    const PosteriorParams p = encode_params(model, reference.features.row_copy(idx));
    for (std::size_t j = 0; j < d; ++j) {
      z.at(i, j) = p.mu.data[j] + p.sigma.data[j] * rng.normal();
    }
  }
  return decode(model, z);
}

Tensor perturb_via_vae_ldp(const VaeModel& model, const Tensor& x, Rng& rng) {
  const Encoding e = encode(model, x, rng);
  return decode(model, e.z);
}

void save_vae(const VaeModel& model, const std::string& path) {
  const VaeConfig& c = model.config;
  nlohmann::json manifest;
  manifest["format"] = "vaedp-vae-v1";
  manifest["config"] = {
      {"data_dim", c.data_dim},
      {"latent_dim", c.latent_dim},
      {"mode", c.mode == VaeMode::kVaeLdp ? "vae_ldp" : "standard"},
      {"noise_bound", c.noise_bound},
      {"mean_bound", c.mean_bound},
      {"weights", {{"kl", c.weights.kl}, {"rec", c.weights.rec}, {"cls", c.weights.cls}}},
      {"class_count", c.class_count},
      {"conditional_generation", c.conditional_generation},
  };
  manifest["encoder"] = net_manifest(model.encoder);
  manifest["decoder"] = net_manifest(model.decoder);
  if (model.has_head()) manifest["head"] = net_manifest(model.head);
  manifest["seed"] = model.init_seed;
  manifest["steps"] = model.trained_steps;

  std::vector<double> blob;
  append_net_blob(model.encoder, blob);
  append_net_blob(model.decoder, blob);
  if (model.has_head()) append_net_blob(model.head, blob);
  write_manifest_and_blob(manifest, blob, path);
}

VaeModel load_vae(const std::string& path) {
  ManifestAndBlob raw = read_manifest_and_blob(path);
  if (raw.manifest.value("format", "") != "vaedp-vae-v1") {
    throw IoError("not a vaedp-vae-v1 checkpoint: " + path);
  }
  VaeModel m;
  const nlohmann::json& jc = raw.manifest.at("config");
  m.config.data_dim = jc.at("data_dim").get<std::size_t>();
  m.config.latent_dim = jc.at("latent_dim").get<std::size_t>();
  m.config.mode = jc.at("mode").get<std::string>() == "vae_ldp" ? VaeMode::kVaeLdp
                                                                : VaeMode::kStandard;
  m.config.noise_bound = jc.at("noise_bound").get<double>();
  m.config.mean_bound = jc.at("mean_bound").get<double>();
  m.config.weights.kl = jc.at("weights").at("kl").get<double>();
  m.config.weights.rec = jc.at("weights").at("rec").get<double>();
  m.config.weights.cls = jc.at("weights").at("cls").get<double>();
  m.config.class_count = jc.at("class_count").get<std::size_t>();
  m.config.conditional_generation = jc.at("conditional_generation").get<bool>();
  m.encoder = net_from_manifest(raw.manifest.at("encoder"));
  m.decoder = net_from_manifest(raw.manifest.at("decoder"));
  m.init_seed = raw.manifest.at("seed").get<std::uint64_t>();
  m.trained_steps = raw.manifest.at("steps").get<std::uint64_t>();
  std::size_t offset = read_net_blob(m.encoder, raw.blob, 0);
  offset = read_net_blob(m.decoder, raw.blob, offset);
  if (raw.manifest.contains("head")) {
    m.head = net_from_manifest(raw.manifest.at("head"));
    offset = read_net_blob(m.head, raw.blob, offset);
  }
  if (offset != raw.blob.size()) throw IoError("trailing bytes in checkpoint: " + path);
  return m;
}

}  // namespace vaedp

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

#ifndef VAEDP_VAE_HPP_
#define VAEDP_VAE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vaedp/accountant.hpp"
#include "vaedp/adam.hpp"
#include "vaedp/dataset.hpp"
#include "vaedp/net.hpp"
#include "vaedp/rng.hpp"
#include "vaedp/tensor.hpp"

namespace vaedp {

enum class VaeMode { kStandard, kVaeLdp };

// total = kl*KL + rec*reconstruction + cls*classifier
struct LossWeights {
  double kl = 1.0;
  double rec = 1.0;
  double cls = 0.0;
};

struct VaeConfig {
  std::size_t data_dim = 0;
  std::size_t latent_dim = 8;
  std::vector<std::size_t> encoder_hidden = {64};
  std::vector<std::size_t> decoder_hidden = {64};
  Activation hidden_act = Activation::kLeakyRelu;
  Activation output_act = Activation::kSigmoid;
  double leaky_slope = 0.2;
  VaeMode mode = VaeMode::kStandard;
  double noise_bound = 0.0;  // sigma_b: lower bound on the encoder std (vae_ldp)
  double mean_bound = 3.0;   // encoder mean is tanh-bounded to this box (vae_ldp)
  LossWeights weights;
  std::size_t class_count = 0;  // >0 attaches the linear classifier head on mu
  bool conditional_generation = false;
};

// Encoder maps data_dim -> 2*latent_dim ([mu | log sigma^2]); decoder maps
// latent_dim -> data_dim. In vae_ldp mode the encoder mean passes through
// mean_bound * tanh(.) and the std is floored at noise_bound.
struct VaeModel {
  VaeConfig config;
  DenseNet encoder;
  DenseNet decoder;
  DenseNet head;  // latent_dim -> class_count softmax; empty when unused
  std::uint64_t init_seed = 0;
  std::uint64_t trained_steps = 0;

  bool has_head() const { return config.class_count > 0; }
  std::vector<Tensor*> params();
  std::vector<const Tensor*> params() const;
  std::vector<std::string> param_names() const;
};

VaeModel make_vae(const VaeConfig& config, Rng& rng);

// Posterior parameters for a batch, with the mode transforms applied.
struct PosteriorParams {
  Tensor mu;     // {B, d}
  Tensor sigma;  // {B, d}, strictly positive
};
PosteriorParams encode_params(const VaeModel& model, const Tensor& x);

// Reparameterized encoding z = mu + sigma * eta, eta ~ N(0, I).
struct Encoding {
  Tensor mu, sigma, z;
};
Encoding encode(const VaeModel& model, const Tensor& x, Rng& rng);

Tensor decode(const VaeModel& model, const Tensor& z);

// Batch mean of 0.5 * sum_j (sigma_j^2 + mu_j^2 - 1 - log sigma_j^2).
double kl_divergence(const Tensor& mu, const Tensor& log_var);

struct VaeLossValue {
  double reconstruction = 0.0;
  double kl = 0.0;
  double classifier = 0.0;
  double total = 0.0;
};

// Loss and parameter gradients for a single example with the latent noise
// `eta` supplied by the caller; gradients are exact for fixed eta. `label`
// feeds the classifier head, -1 disables it. Gradient order matches
// VaeModel::params().
struct VaeExampleGrads {
  VaeLossValue loss;
  std::vector<Tensor> grads;
};
VaeExampleGrads vae_example_grads(const VaeModel& model, const Tensor& x, int label,
                                  const Tensor& eta);

// Deterministic loss over a dataset (eta = 0, z = mu).
VaeLossValue evaluate_vae_loss(const VaeModel& model, const Dataset& data);

// ----- Training -----

struct DpTrainConfig {
  double clipping_norm = 1.0;    // +inf disables clipping
  double noise_multiplier = 0.0; // z
};

struct VaeTrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  AdamConfig adam;
  std::optional<DpTrainConfig> dp;
  std::size_t collapse_patience = 10;
  double collapse_kl_threshold = 1e-3;
  // Relative slack below which validation reconstruction counts as
  // non-decreasing (plateaus jitter at float scale).
  double collapse_rec_tolerance = 1e-9;
  bool record_preclip_norms = false;   // feeds the clipping-norm heuristic
  bool record_clipped_norms = false;
};

struct VaeEpochStats {
  double train_loss = 0.0;
  double train_rec = 0.0;
  double train_kl = 0.0;
  double val_loss = 0.0;
  double val_rec = 0.0;
};

struct VaeTrainLog {
  std::vector<VaeEpochStats> epochs;
  bool posterior_collapse = false;
  std::size_t collapse_epoch = 0;
  std::uint64_t steps = 0;
  std::vector<double> preclip_norms;
  std::vector<double> clipped_norms;
};

// Minimizes the weighted loss with Adam; with `dp` set every step uses the
// clipped-and-noised mean gradient and `accountant` (when given) accumulates
// one step per batch. Deterministic for a fixed rng seed: per-example latent
// noise streams are keyed by (epoch, record id), DP noise by step.
VaeTrainLog train_vae(VaeModel& model, const Dataset& train, const Dataset& val,
                      const VaeTrainConfig& config, RdpAccountant* accountant,
                      Rng& rng);

// ----- Generation / perturbation -----

// n decoded draws from the latent prior z ~ N(0, I).
Tensor generate_prior(const VaeModel& model, std::size_t n, Rng& rng);

// n samples of one class: z is drawn from the record-specific posterior of
// randomly chosen `reference` records with that label, then decoded.
// Throws ParamError when the label is out of range or absent.
Tensor generate_conditional(const VaeModel& model, const Dataset& reference,
                            int label, std::size_t n, Rng& rng);

// LDP release of records through a vae_ldp-mode model: bounded-mean,
// floored-std encode, then decode. Accepts a single record or a batch.
Tensor perturb_via_vae_ldp(const VaeModel& model, const Tensor& x, Rng& rng);

// ----- Checkpoint I/O (JSON manifest line + little-endian f64 blob) -----

void save_vae(const VaeModel& model, const std::string& path);
VaeModel load_vae(const std::string& path);

}  // namespace vaedp

#endif  // VAEDP_VAE_HPP_

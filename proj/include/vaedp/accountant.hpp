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

#ifndef VAEDP_ACCOUNTANT_HPP_
#define VAEDP_ACCOUNTANT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace vaedp {

struct EpsDeltaBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  double minimizing_alpha = 0.0;
  bool non_private = false;  // set when z = 0
};

// Renyi divergence of one subsampled-Gaussian step at order alpha, for
// sampling rate q and noise multiplier sigma (sensitivity-normalized).
// q = 1 reduces to the analytic alpha / (2 sigma^2). Integer orders use the
// finite binomial sum, fractional orders the two-sided series; all arithmetic
// is log-domain.
double subsampled_gaussian_rdp(double q, double sigma, double alpha);

// The usual integer-and-fractional order grid, 1.25 .. 512.
const std::vector<double>& default_rdp_orders();

// Tracks the accumulated Renyi DP of iterated DP-Adam steps and converts the
// ledger to an (eps, delta) budget.
class RdpAccountant {
 public:
  RdpAccountant(double sampling_rate, double noise_multiplier,
                std::vector<double> orders = default_rdp_orders());

  // Adds `steps` compositions of the per-step RDP to every order.
  void accumulate_step(std::uint64_t steps = 1);

  // eps = min over orders of eps_rdp(alpha) + log(1/delta)/(alpha - 1).
  // With z = 0 the result is an infinite-epsilon, non_private budget.
  EpsDeltaBudget to_eps_delta(double delta) const;

  std::uint64_t step_count() const { return steps_; }
  double sampling_rate() const { return q_; }
  double noise_multiplier() const { return z_; }
  const std::vector<double>& orders() const { return orders_; }
  const std::vector<double>& eps_rdp() const { return eps_rdp_; }

  // {q, z, T, delta, orders, eps_rdp[], eps, minimizing_alpha}
  std::string export_json(double delta) const;

 private:
  double q_;
  double z_;
  std::vector<double> orders_;
  std::vector<double> per_step_;  // RDP of one step per order
  std::vector<double> eps_rdp_;
  std::uint64_t steps_ = 0;
};

// Budget consumed by releasing one record through the VAE-LDP mechanism:
// eps = sensitivity * sqrt(2 log(1.25/delta)) / sigma with the bounded-mean
// box diameter sensitivity = 2 * mean_bound * sqrt(latent_dim).
double vae_ldp_epsilon(double sigma, double delta, std::size_t latent_dim,
                       double mean_bound);

}  // namespace vaedp

#endif  // VAEDP_ACCOUNTANT_HPP_

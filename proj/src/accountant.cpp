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

#include "vaedp/accountant.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "vaedp/error.hpp"

namespace vaedp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  if (b > a) throw NumericError("rdp: log_sub of a larger value");
  if (a == b) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  // Asymptotic expansion; erfc underflows near x = 26.6.
  const double x2 = x * x;
  return -x2 - std::log(x * std::sqrt(M_PI)) +
         std::log1p(-0.5 / x2 + 0.75 / (x2 * x2));
}

// Finite binomial sum for integer alpha:
// log sum_{i=0}^{alpha} [C(alpha,i) q^i (1-q)^(alpha-i) e^{i(i-1)/(2 sigma^2)}]
double log_a_int(double q, double sigma, std::uint64_t alpha) {
  double log_a = kNegInf;
  double log_coef = 0.0;  // log C(alpha, i), updated incrementally
  for (std::uint64_t i = 0; i <= alpha; ++i) {
    if (i > 0) {
      log_coef += std::log(static_cast<double>(alpha - i + 1)) -
                  std::log(static_cast<double>(i));
    }
    const double di = static_cast<double>(i);
    const double s = log_coef + di * std::log(q) +
                     (static_cast<double>(alpha) - di) * std::log1p(-q) +
                     (di * di - di) / (2.0 * sigma * sigma);
    log_a = log_add(log_a, s);
  }
  return log_a;
}

// Two-sided series for fractional alpha, split at z0 with erfc tails.
double log_a_frac(double q, double sigma, double alpha) {
  double log_a0 = kNegInf, log_a1 = kNegInf;
  const double z0 = sigma * sigma * std::log(1.0 / q - 1.0) + 0.5;
  double log_abs_coef = 0.0;  // log |C(alpha, i)|
  double coef_sign = 1.0;
  for (int i = 0;; ++i) {
    if (i > 0) {
      const double factor = (alpha - static_cast<double>(i) + 1.0) /
                            static_cast<double>(i);
      if (factor == 0.0) break;  // alpha integral; series terminates
      log_abs_coef += std::log(std::fabs(factor));
      if (factor < 0.0) coef_sign = -coef_sign;
    }
    const double di = static_cast<double>(i);
    const double j = alpha - di;
    const double log_t0 = log_abs_coef + di * std::log(q) + j * std::log1p(-q);
    const double log_t1 = log_abs_coef + j * std::log(q) + di * std::log1p(-q);
    const double log_e0 =
        std::log(0.5) + log_erfc((di - z0) / (std::sqrt(2.0) * sigma));
    const double log_e1 =
        std::log(0.5) + log_erfc((z0 - j) / (std::sqrt(2.0) * sigma));
    const double log_s0 = log_t0 + (di * di - di) / (2.0 * sigma * sigma) + log_e0;
    const double log_s1 = log_t1 + (j * j - j) / (2.0 * sigma * sigma) + log_e1;
    if (coef_sign > 0.0) {
      log_a0 = log_add(log_a0, log_s0);
      log_a1 = log_add(log_a1, log_s1);
    } else {
      log_a0 = log_sub(log_a0, log_s0);
      log_a1 = log_sub(log_a1, log_s1);
    }
    if (std::max(log_s0, log_s1) < -30.0 && i > alpha) break;
    if (i > 10000) throw NumericError("rdp: fractional series did not converge");
  }
  return log_add(log_a0, log_a1);
}

}  // namespace

double subsampled_gaussian_rdp(double q, double sigma, double alpha) {
  if (!(q > 0.0 && q <= 1.0)) throw ParamError("rdp: q must lie in (0,1]");
  if (!(sigma > 0.0)) throw ParamError("rdp: sigma must be positive");
  if (!(alpha > 1.0)) throw ParamError("rdp: order must exceed 1");
  if (q == 1.0) return alpha / (2.0 * sigma * sigma);
  double log_a;
  if (alpha == std::floor(alpha)) {
    log_a = log_a_int(q, sigma, static_cast<std::uint64_t>(alpha));
  } else {
    log_a = log_a_frac(q, sigma, alpha);
  }
  return std::max(0.0, log_a / (alpha - 1.0));
}

const std::vector<double>& default_rdp_orders() {
  static const std::vector<double> orders = [] {
    std::vector<double> o = {1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 3.0, 3.5, 4.0, 4.5};
    for (int a = 5; a <= 64; ++a) o.push_back(static_cast<double>(a));
    o.push_back(128.0);
    o.push_back(256.0);
    o.push_back(512.0);
    return o;
  }();
  return orders;
}

RdpAccountant::RdpAccountant(double sampling_rate, double noise_multiplier,
                             std::vector<double> orders)
    : q_(sampling_rate), z_(noise_multiplier), orders_(std::move(orders)) {
  if (orders_.empty()) throw ConfigError("accountant: order grid is empty");
  if (!(q_ > 0.0 && q_ <= 1.0)) throw ParamError("accountant: q must lie in (0,1]");
  if (z_ < 0.0) throw ParamError("accountant: z must be >= 0");
  per_step_.resize(orders_.size(), 0.0);
  eps_rdp_.resize(orders_.size(), 0.0);
  if (z_ > 0.0) {
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      per_step_[i] = subsampled_gaussian_rdp(q_, z_, orders_[i]);
    }
  }
}

void RdpAccountant::accumulate_step(std::uint64_t steps) {
  steps_ += steps;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    eps_rdp_[i] = per_step_[i] * static_cast<double>(steps_);
  }
}

EpsDeltaBudget RdpAccountant::to_eps_delta(double delta) const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParamError("accountant: delta must lie in (0,1)");
  }
  EpsDeltaBudget budget;
  budget.delta = delta;
  if (z_ == 0.0) {
    budget.epsilon = std::numeric_limits<double>::infinity();
    budget.non_private = true;
    budget.minimizing_alpha = orders_.front();
    return budget;
  }
  double best = std::numeric_limits<double>::infinity();
  double best_alpha = orders_.front();
  const double log_inv_delta = std::log(1.0 / delta);
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const double eps = eps_rdp_[i] + log_inv_delta / (orders_[i] - 1.0);
    if (eps < best) {
      best = eps;
      best_alpha = orders_[i];
    }
  }
  budget.epsilon = best;
  budget.minimizing_alpha = best_alpha;
  return budget;
}

std::string RdpAccountant::export_json(double delta) const {
  const EpsDeltaBudget budget = to_eps_delta(delta);
  nlohmann::json j;
  j["q"] = q_;
  j["z"] = z_;
  j["T"] = steps_;
  j["delta"] = delta;
  j["orders"] = orders_;
  j["eps_rdp"] = eps_rdp_;
  j["eps"] = budget.non_private ? nlohmann::json("inf") : nlohmann::json(budget.epsilon);
  j["minimizing_alpha"] = budget.minimizing_alpha;
  j["non_private"] = budget.non_private;
  return j.dump();
}

double vae_ldp_epsilon(double sigma, double delta, std::size_t latent_dim,
                       double mean_bound) {
  if (!(sigma > 0.0)) throw ParamError("vae_ldp_epsilon: sigma must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParamError("vae_ldp_epsilon: delta must lie in (0,1)");
  }
  if (latent_dim == 0 || !(mean_bound > 0.0)) {
    throw ParamError("vae_ldp_epsilon: latent_dim and mean_bound must be positive");
  }
  const double sensitivity =
      2.0 * mean_bound * std::sqrt(static_cast<double>(latent_dim));
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / sigma;
}

}  // namespace vaedp

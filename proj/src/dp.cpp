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

#include "vaedp/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "vaedp/error.hpp"
#include "vaedp/kernels.hpp"

namespace vaedp {

double gaussian_sigma(double epsilon, double delta, double sensitivity) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw OutOfRangeError(
        "gaussian_sigma: epsilon must lie in (0,1); use the RDP accountant for "
        "larger budgets");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParamError("gaussian_sigma: delta must lie in (0,1)");
  }
  if (!(sensitivity > 0.0)) {
    throw ParamError("gaussian_sigma: sensitivity must be positive");
  }
  return std::sqrt(2.0 * std::log(1.25 / delta)) * sensitivity / epsilon;
}

double gaussian_sigma(const PrivacyParams& params) {
  return gaussian_sigma(params.epsilon, params.delta, params.sensitivity);
}

double global_l2_norm(const std::vector<Tensor>& grad) {
  const auto& k = kernels::active();
  double ss = 0.0;
  for (const Tensor& t : grad) ss += k.sumsq(t.data.data(), t.numel());
  return std::sqrt(ss);
}

void clip_gradient_in_place(std::vector<Tensor>& grad, double c) {
  if (!(c > 0.0)) throw ParamError("clip: clipping norm must be positive");
  if (std::isinf(c)) return;
  const double norm = global_l2_norm(grad);
  if (norm <= c) return;
  const double s = c / norm;
  const auto& k = kernels::active();
  for (Tensor& t : grad) k.scale(s, t.data.data(), t.numel());
}

std::vector<std::vector<Tensor>> clip_gradients(
    const std::vector<std::vector<Tensor>>& per_example, double c) {
  std::vector<std::vector<Tensor>> out = per_example;
  for (auto& g : out) clip_gradient_in_place(g, c);
  return out;
}

std::vector<Tensor> dp_gradient(const std::vector<std::vector<Tensor>>& per_example,
                                double c, double z, Rng& rng,
                                std::vector<double>* clipped_norms) {
  if (per_example.empty()) throw ParamError("dp_gradient: batch must be non-empty");
  if (z < 0.0) throw ParamError("dp_gradient: noise multiplier must be >= 0");
  const auto& k = kernels::active();

  std::vector<Tensor> acc;
  for (const Tensor& t : per_example.front()) acc.push_back(Tensor::zeros(t.shape));

  for (const auto& example : per_example) {
    std::vector<Tensor> g = example;
    clip_gradient_in_place(g, c);
    if (clipped_norms) clipped_norms->push_back(global_l2_norm(g));
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (!same_shape(g[i], acc[i])) {
        throw ParamError("dp_gradient: per-example gradient shapes disagree");
      }
      k.axpy(1.0, g[i].data.data(), acc[i].data.data(), g[i].numel());
    }
  }

  if (z > 0.0) {
    if (std::isinf(c)) {
      throw ParamError("dp_gradient: noise needs a finite clipping norm");
    }
    const double sigma = z * c;
    for (Tensor& t : acc) {
      for (double& v : t.data) v += sigma * rng.normal();
    }
  }

  const double inv_b = 1.0 / static_cast<double>(per_example.size());
  for (Tensor& t : acc) k.scale(inv_b, t.data.data(), t.numel());
  return acc;
}

double clipping_norm_heuristic(const std::vector<double>& gradient_norm_log) {
  if (gradient_norm_log.empty()) {
    throw StateError("clipping heuristic: no recorded gradient norms");
  }
  std::vector<double> norms = gradient_norm_log;
  std::sort(norms.begin(), norms.end());
  const std::size_t n = norms.size();
  if (n % 2 == 1) return norms[n / 2];
  return 0.5 * (norms[n / 2 - 1] + norms[n / 2]);
}

double PixelizationParams::laplace_scale() const {
  if (!(epsilon_per_feature > 0.0) || !(neighborhood > 0.0) || cell_size == 0 ||
      !(value_range > 0.0)) {
    throw ParamError("pixelization: all parameters must be positive");
  }
  const double b2 = static_cast<double>(cell_size) * static_cast<double>(cell_size);
  const double lambda = value_range * neighborhood / (b2 * epsilon_per_feature);
  // eps = +inf gives lambda = 0 exactly, the documented no-noise test hook.
  if (!std::isfinite(lambda)) throw ParamError("pixelization: scale is not finite");
  return lambda;
}

void LocalAlgorithmLedger::record(std::int64_t record_id, const std::string& mechanism,
                                  double eps_i, std::uint64_t invocations) {
  LedgerEntry e;
  e.record_id = record_id;
  e.mechanism = mechanism;
  e.eps_i = eps_i;
  e.invocations = invocations;
  e.eps_total = eps_i * static_cast<double>(invocations);
  entries_.push_back(std::move(e));
}

double LocalAlgorithmLedger::record_total(std::int64_t record_id) const {
  double total = 0.0;
  for (const LedgerEntry& e : entries_) {
    if (e.record_id == record_id) total += e.eps_total;
  }
  return total;
}

std::string LocalAlgorithmLedger::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const LedgerEntry& e : entries_) {
    arr.push_back({{"record_id", e.record_id},
                   {"mechanism", e.mechanism},
                   {"eps_i", e.eps_i},
                   {"invocations", e.invocations},
                   {"eps_total", e.eps_total}});
  }
  return arr.dump();
}

Tensor pixelize_ldp(const Tensor& image, std::size_t img_rows, std::size_t img_cols,
                    const PixelizationParams& params, Rng& rng,
                    LocalAlgorithmLedger* ledger, std::int64_t record_id) {
  if (image.numel() != img_rows * img_cols) {
    throw ParamError("pixelize: image size does not match stated dimensions");
  }
  const std::size_t b = params.cell_size;
  if (b == 0 || img_rows % b != 0 || img_cols % b != 0) {
    throw ParamError("pixelize: image dimensions must be divisible by cell size");
  }
  const double lambda = params.laplace_scale();
  const double range = params.value_range;

  // Cell math stays in normalized units; the Laplace draw is taken at the
  // de-normalized scale (where the calibration formula lives) and mapped
  // down, so lambda = 0 with b = 1 is exactly the identity on in-range
  // images.
  Tensor out = Tensor::zeros(image.shape);
  for (std::size_t cr = 0; cr < img_rows / b; ++cr) {
    for (std::size_t cc = 0; cc < img_cols / b; ++cc) {
      double sum = 0.0;
      for (std::size_t r = 0; r < b; ++r) {
        for (std::size_t c = 0; c < b; ++c) {
          sum += image.data[(cr * b + r) * img_cols + (cc * b + c)];
        }
      }
      double noisy = sum / static_cast<double>(b * b);
      if (lambda > 0.0) noisy += rng.laplace(lambda) / range;
      noisy = std::clamp(noisy, 0.0, 1.0);
      for (std::size_t r = 0; r < b; ++r) {
        for (std::size_t c = 0; c < b; ++c) {
          out.data[(cr * b + r) * img_cols + (cc * b + c)] = noisy;
        }
      }
    }
  }
  if (ledger) ledger->record(record_id, "pixelize", params.epsilon_per_feature, 1);
  return out;
}

Tensor laplace_feature_ldp(const Tensor& series, std::size_t timesteps,
                           std::size_t features, double eps_per_feature,
                           const std::vector<double>& per_feature_sensitivity,
                           Rng& rng, LocalAlgorithmLedger* ledger,
                           std::int64_t record_id) {
  if (series.numel() != timesteps * features) {
    throw ParamError("laplace_feature: series size does not match dimensions");
  }
  if (per_feature_sensitivity.size() != features) {
    throw ParamError("laplace_feature: one sensitivity required per feature");
  }
  if (!(eps_per_feature > 0.0)) {
    throw ParamError("laplace_feature: eps per feature must be positive");
  }
  for (double s : per_feature_sensitivity) {
    if (!(s > 0.0)) throw ParamError("laplace_feature: sensitivities must be positive");
  }
  Tensor out = series;
  for (std::size_t t = 0; t < timesteps; ++t) {
    for (std::size_t f = 0; f < features; ++f) {
      out.data[t * features + f] +=
          rng.laplace(per_feature_sensitivity[f] / eps_per_feature);
    }
  }
  if (ledger) {
    ledger->record(record_id, "laplace_feature", eps_per_feature,
                   static_cast<std::uint64_t>(timesteps * features));
  }
  return out;
}

}  // namespace vaedp

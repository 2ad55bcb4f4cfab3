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

#ifndef VAEDP_DP_HPP_
#define VAEDP_DP_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vaedp/rng.hpp"
#include "vaedp/tensor.hpp"

namespace vaedp {

// All central-DP knobs in one place.
struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 1.0;       // global l2 sensitivity
  double noise_multiplier = 0.0;  // z
  double clipping_norm = 1.0;     // C; +inf disables clipping
};

// Minimal sigma for the classic Gaussian mechanism,
// sigma = sqrt(2 ln(1.25/delta)) * sensitivity / epsilon.
// Valid only for epsilon in (0,1); larger epsilon must go through the RDP
// accountant, and the error says so.
double gaussian_sigma(double epsilon, double delta, double sensitivity);
double gaussian_sigma(const PrivacyParams& params);

// l2 norm across all blocks of one per-example gradient.
double global_l2_norm(const std::vector<Tensor>& grad);

// Scales `grad` to norm exactly c when its global l2 norm exceeds c; no-op
// otherwise (including c = +inf).
void clip_gradient_in_place(std::vector<Tensor>& grad, double c);

// Clipped copies of every per-example gradient.
std::vector<std::vector<Tensor>> clip_gradients(
    const std::vector<std::vector<Tensor>>& per_example, double c);

// DP-Adam gradient: (1/B) * (sum_i clip(g_i, c) + N(0, (z*c)^2 I)).
// With z=0 the noise draw is skipped entirely and the result is the clipped
// mean, bit for bit. Clipped per-example norms are appended to
// *clipped_norms when provided.
std::vector<Tensor> dp_gradient(const std::vector<std::vector<Tensor>>& per_example,
                                double c, double z, Rng& rng,
                                std::vector<double>* clipped_norms = nullptr);

// Median of per-example gradient norms recorded during a preliminary
// non-private run (mean-of-middle for even length). Empty log is a
// StateError.
double clipping_norm_heuristic(const std::vector<double>& gradient_norm_log);

// ----- Local DP -----

struct PixelizationParams {
  double epsilon_per_feature = 1.0;  // eps_i for one image
  double neighborhood = 1.0;         // m
  std::size_t cell_size = 1;         // b
  double value_range = 255.0;        // L; pixel units before normalization

  // Laplace scale lambda = value_range * m / (b^2 * eps_i).
  double laplace_scale() const;
};

// Per-record privacy ledger for local randomizers. A record's total is the
// exact sum of its invocations' budgets.
struct LedgerEntry {
  std::int64_t record_id = 0;
  std::string mechanism;
  double eps_i = 0.0;
  std::uint64_t invocations = 0;
  double eps_total = 0.0;
};

class LocalAlgorithmLedger {
 public:
  void record(std::int64_t record_id, const std::string& mechanism, double eps_i,
              std::uint64_t invocations);
  const std::vector<LedgerEntry>& entries() const { return entries_; }
  // Sum of eps_total over entries of one record.
  double record_total(std::int64_t record_id) const;
  std::string to_json() const;

 private:
  std::vector<LedgerEntry> entries_;
};

// Differentially private pixelization of one image, normalized to [0,1] on
// input and output. Replaces each b-by-b cell by its mean plus Lap(lambda)
// noise calibrated in de-normalized [0, value_range] units, then clamps to
// the valid range. Image dimensions must be divisible by b. lambda = 0
// (eps_i = +inf) with b = 1 is exactly the identity on in-range images.
Tensor pixelize_ldp(const Tensor& image, std::size_t img_rows, std::size_t img_cols,
                    const PixelizationParams& params, Rng& rng,
                    LocalAlgorithmLedger* ledger = nullptr,
                    std::int64_t record_id = 0);

// Laplace perturbation of one flattened time-series record with per-feature
// sensitivities: adds Lap(sens_j / eps_i) to every scalar of feature column
// j. Ledger total is eps_i * (number of scalars in the record).
Tensor laplace_feature_ldp(const Tensor& series, std::size_t timesteps,
                           std::size_t features, double eps_per_feature,
                           const std::vector<double>& per_feature_sensitivity,
                           Rng& rng, LocalAlgorithmLedger* ledger = nullptr,
                           std::int64_t record_id = 0);

}  // namespace vaedp

#endif  // VAEDP_DP_HPP_

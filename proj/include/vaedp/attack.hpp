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

#ifndef VAEDP_ATTACK_HPP_
#define VAEDP_ATTACK_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vaedp/dataset.hpp"
#include "vaedp/rng.hpp"
#include "vaedp/tensor.hpp"
#include "vaedp/vae.hpp"

namespace vaedp {

// Mean of squared element differences.
double mse(const Tensor& a, const Tensor& b);

struct SsimParams {
  std::size_t window = 7;  // uniform sliding window, clamped to the image
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;  // L
};

// Mean over sliding windows of the luminance-contrast-structure product with
// C1=(k1*L)^2, C2=(k2*L)^2. Inputs are flattened rows-by-cols images.
double ssim(const Tensor& a, const Tensor& b, std::size_t rows, std::size_t cols,
            const SsimParams& params = {});

enum class DistanceKind { kMse, kSsim };
DistanceKind distance_from_name(const std::string& name);
const char* distance_name(DistanceKind kind);

struct AttackConfig {
  std::size_t n_samples = 300;  // latent draws per record
  DistanceKind distance = DistanceKind::kMse;
  SsimParams ssim;
  // Image interpretation for SSIM; taken from the dataset's record shape.
  std::size_t img_rows = 0;
  std::size_t img_cols = 0;
};

// Mean reconstruction score of one record over n_samples posterior draws,
// sign-normalized so that larger always means more member-like: distances
// (MSE) are negated, similarities (SSIM) kept.
double reconstruction_score(const VaeModel& model, const Tensor& record,
                            const AttackConfig& config, Rng& rng);

// Non-interpolated step AP over the ranked scores; records with equal scores
// share one threshold. Throws ParamError when no label is positive.
double average_precision(const std::vector<double>& scores,
                         const std::vector<int>& labels);

struct AttackRecordScore {
  std::int64_t record_id = 0;
  double score = 0.0;
  bool is_member = false;
};

struct AttackResult {
  double average_precision = 0.0;
  std::vector<AttackRecordScore> table;
  std::size_t n_per_side = 0;
  bool n_clamped = false;  // requested size exceeded a split
};

// Balanced attack set of n_per_side members (train) and non-members (test),
// each scored with a per-record rng stream. Splits must be disjoint by id.
AttackResult run_attack(const VaeModel& model, const Dataset& train,
                        const Dataset& test, std::size_t n_per_side,
                        const AttackConfig& config, Rng& rng);

// CSV with header record_id,score,is_member.
std::string score_table_csv(const AttackResult& result);

}  // namespace vaedp

#endif  // VAEDP_ATTACK_HPP_

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

#include "vaedp/attack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "vaedp/error.hpp"

namespace vaedp {

double mse(const Tensor& a, const Tensor& b) {
  if (a.numel() != b.numel() || a.numel() == 0) {
    throw ParamError("mse: shapes must match and be non-empty");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) {
    const double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return s / static_cast<double>(a.numel());
}

double ssim(const Tensor& a, const Tensor& b, std::size_t rows, std::size_t cols,
            const SsimParams& params) {
  if (a.numel() != b.numel()) throw ParamError("ssim: shape mismatch");
  if (a.numel() != rows * cols || rows == 0 || cols == 0) {
    throw ParamError("ssim: rows*cols must match the tensor size");
  }
  if (!(params.dynamic_range > 0.0) || params.window == 0) {
    throw ParamError("ssim: dynamic range and window must be positive");
  }
  const double c1 = params.k1 * params.dynamic_range * params.k1 * params.dynamic_range;
  const double c2 = params.k2 * params.dynamic_range * params.k2 * params.dynamic_range;
  const std::size_t wr = std::min(params.window, rows);
  const std::size_t wc = std::min(params.window, cols);
  const double wn = static_cast<double>(wr * wc);

  double total = 0.0;
  std::size_t windows = 0;
  for (std::size_t r0 = 0; r0 + wr <= rows; ++r0) {
    for (std::size_t c0 = 0; c0 + wc <= cols; ++c0) {
      double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (std::size_t r = 0; r < wr; ++r) {
        for (std::size_t c = 0; c < wc; ++c) {
          const double x = a.data[(r0 + r) * cols + (c0 + c)];
          const double y = b.data[(r0 + r) * cols + (c0 + c)];
          sx += x;
          sy += y;
          sxx += x * x;
          syy += y * y;
          sxy += x * y;
        }
      }
      const double mx = sx / wn, my = sy / wn;
      const double vx = sxx / wn - mx * mx;
      const double vy = syy / wn - my * my;
      const double cov = sxy / wn - mx * my;
      const double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
      const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
      total += num / den;
      windows += 1;
    }
  }
  return total / static_cast<double>(windows);
}

DistanceKind distance_from_name(const std::string& name) {
  if (name == "mse") return DistanceKind::kMse;
  if (name == "ssim") return DistanceKind::kSsim;
  throw ParamError("unknown distance kind: " + name);
}

const char* distance_name(DistanceKind kind) {
  return kind == DistanceKind::kMse ? "mse" : "ssim";
}

double reconstruction_score(const VaeModel& model, const Tensor& record,
                            const AttackConfig& config, Rng& rng) {
  if (config.n_samples == 0) throw ParamError("reconstruction_score: N must be >= 1");
  if (config.distance == DistanceKind::kSsim &&
      (config.img_rows == 0 || config.img_cols == 0)) {
    throw ParamError("reconstruction_score: SSIM needs image dimensions");
  }
  const PosteriorParams p = encode_params(model, record);
  const std::size_t d = model.config.latent_dim;
  double mean_d = 0.0;
  Tensor z = Tensor::zeros({1, d});
  for (std::size_t i = 0; i < config.n_samples; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      z.data[j] = p.mu.data[j] + p.sigma.data[j] * rng.normal();
    }
    const Tensor xhat = decode(model, z);
    switch (config.distance) {
      case DistanceKind::kMse:
        mean_d += mse(xhat, record);
        break;
      case DistanceKind::kSsim:
        mean_d += ssim(xhat, record, config.img_rows, config.img_cols, config.ssim);
        break;
    }
  }
  mean_d /= static_cast<double>(config.n_samples);
  // Larger score = more member-like: negate error metrics, keep similarities.
  return config.distance == DistanceKind::kMse ? -mean_d : mean_d;
}

double average_precision(const std::vector<double>& scores,
                         const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw ParamError("average_precision: scores/labels mismatch");
  }
  std::size_t positives = 0;
  for (int l : labels) positives += l > 0 ? 1 : 0;
  if (positives == 0) {
    throw ParamError("average_precision: undefined without positive labels");
  }
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t seen = 0, hit = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    // Records sharing a score form one threshold step.
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      seen += 1;
      hit += labels[idx[j]] > 0 ? 1 : 0;
      ++j;
    }
    const double recall = static_cast<double>(hit) / static_cast<double>(positives);
    const double precision = static_cast<double>(hit) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

AttackResult run_attack(const VaeModel& model, const Dataset& train,
                        const Dataset& test, std::size_t n_per_side,
                        const AttackConfig& config, Rng& rng) {
  if (n_per_side == 0) throw ParamError("run_attack: n_per_side must be >= 1");
  std::set<std::int64_t> train_ids(train.ids.begin(), train.ids.end());
  for (std::int64_t id : test.ids) {
    if (train_ids.count(id)) {
      throw IntegrityError("run_attack: train and test splits overlap (id " +
                           std::to_string(id) + ")");
    }
  }

  const std::size_t n = std::min({n_per_side, train.size(), test.size()});
  AttackResult result;
  result.n_per_side = n;
  result.n_clamped = n < n_per_side;

  // Balanced draw without replacement from each side.
  auto sample_side = [&](const Dataset& side, const char* label) {
    std::vector<std::size_t> order(side.size());
    std::iota(order.begin(), order.end(), 0);
    Rng srng = rng.split(label);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[srng.next_u64() % i]);
    }
    order.resize(n);
    return order;
  };
  const std::vector<std::size_t> members = sample_side(train, "members");
  const std::vector<std::size_t> nonmembers = sample_side(test, "nonmembers");

  Rng score_root = rng.split("score");
  auto score_one = [&](const Dataset& side, std::size_t idx, bool is_member) {
    Rng rec_rng = score_root.split(static_cast<std::uint64_t>(side.ids[idx]))
                      .split(is_member ? "m" : "n");
    AttackRecordScore row;
    row.record_id = side.ids[idx];
    row.is_member = is_member;
    row.score = reconstruction_score(model, side.features.row_copy(idx), config, rec_rng);
    return row;
  };
  for (std::size_t idx : members) result.table.push_back(score_one(train, idx, true));
  for (std::size_t idx : nonmembers) {
    result.table.push_back(score_one(test, idx, false));
  }

  std::vector<double> scores;
  std::vector<int> labels;
  for (const AttackRecordScore& row : result.table) {
    scores.push_back(row.score);
    labels.push_back(row.is_member ? 1 : 0);
  }
  result.average_precision = average_precision(scores, labels);
  return result;
}

std::string score_table_csv(const AttackResult& result) {
  std::ostringstream out;
  out << "record_id,score,is_member\n";
  char buf[40];
  for (const AttackRecordScore& row : result.table) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.score);
    out << row.record_id << ',' << buf << ',' << (row.is_member ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace vaedp

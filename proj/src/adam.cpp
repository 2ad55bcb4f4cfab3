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

#include "vaedp/adam.hpp"

#include <cmath>

#include "vaedp/error.hpp"

namespace vaedp {

AdamState::AdamState(AdamConfig config, const std::vector<const Tensor*>& params,
                     std::vector<std::string> names)
    : config_(config), names_(std::move(names)) {
  if (!(config_.beta1 > 0.0 && config_.beta1 < 1.0) ||
      !(config_.beta2 > 0.0 && config_.beta2 < 1.0)) {
    throw ConfigError("adam: betas must lie in (0,1)");
  }
  if (!(config_.learning_rate > 0.0) || !(config_.epsilon_hat > 0.0)) {
    throw ConfigError("adam: learning rate and epsilon_hat must be positive");
  }
  if (names_.size() != params.size()) {
    throw ConfigError("adam: one name required per parameter block");
  }
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const Tensor* p : params) {
    m_.push_back(Tensor::zeros(p->shape));
    v_.push_back(Tensor::zeros(p->shape));
  }
}

void AdamState::step(const std::vector<Tensor*>& params,
                     const std::vector<Tensor>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ParamError("adam: parameter/gradient block count mismatch");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!same_shape(grads[i], m_[i]) || !same_shape(*params[i], m_[i])) {
      throw ParamError("adam: shape mismatch in block " + names_[i]);
    }
    if (!grads[i].all_finite()) {
      throw NumericError("adam: non-finite gradient in block " + names_[i]);
    }
  }
  t_ += 1;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = config_.learning_rate;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    double* m = m_[i].data.data();
    double* v = v_[i].data.data();
    double* p = params[i]->data.data();
    const double* g = grads[i].data.data();
    const std::size_t n = grads[i].numel();
    for (std::size_t j = 0; j < n; ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      const double mhat = m[j] / corr1;
      const double vhat = v[j] / corr2;
      p[j] -= lr * mhat / (std::sqrt(vhat) + config_.epsilon_hat);
    }
  }
}

}  // namespace vaedp

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

#ifndef VAEDP_ADAM_HPP_
#define VAEDP_ADAM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vaedp/tensor.hpp"

namespace vaedp {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_hat = 1e-8;
};

// Standard Adam with bias correction. One state owns the moments for a fixed
// list of parameter blocks; t increases by exactly 1 per step().
class AdamState {
 public:
  AdamState(AdamConfig config, const std::vector<const Tensor*>& params,
            std::vector<std::string> names);

  // In-place update of `params` from shape-matched `grads`. Throws
  // NumericError naming the first offending block if a gradient is
  // non-finite, and ParamError on any shape mismatch.
  void step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads);

  std::uint64_t t() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::vector<std::string> names_;
  std::uint64_t t_ = 0;
};

}  // namespace vaedp

#endif  // VAEDP_ADAM_HPP_

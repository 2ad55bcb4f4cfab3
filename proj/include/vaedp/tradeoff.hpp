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

#ifndef VAEDP_TRADEOFF_HPP_
#define VAEDP_TRADEOFF_HPP_

#include <cstddef>
#include <vector>

#include "vaedp/adam.hpp"
#include "vaedp/dataset.hpp"
#include "vaedp/net.hpp"
#include "vaedp/rng.hpp"

namespace vaedp {

struct ClassifierConfig {
  std::vector<std::size_t> hidden = {32};
  std::size_t max_epochs = 200;
  std::size_t batch_size = 32;
  AdamConfig adam;
  std::size_t patience = 10;  // early stopping on held-out loss
};

struct ClassifierResult {
  DenseNet net;
  double test_accuracy = 0.0;
  std::size_t epochs_trained = 0;
  double best_heldout_loss = 0.0;
};

// Softmax classifier trained on generated data with early stopping on the
// held-out (test) loss; reports top-1 accuracy on `test`. Never sees the VAE
// training records directly. Throws DegenerateDataError when the training
// data contains a single class.
ClassifierResult train_target_classifier(const Dataset& gen_data,
                                         const Dataset& test_data,
                                         const ClassifierConfig& config, Rng& rng);

double classifier_accuracy(const DenseNet& net, const Dataset& data);

// Relative privacy-accuracy trade-off inputs. Baselines: random-guess attack
// AP 0.5, random-guess accuracy 1/class_count.
struct PhiInputs {
  double atk_orig = 0.0;
  double atk_eps = 0.0;
  double atk_base = 0.5;
  double acc_orig = 0.0;
  double acc_eps = 0.0;
  double acc_base = 0.0;
};

// phi = min(2, max(0,(atk_orig-atk_eps)(acc_orig-acc_base))
//              / max(0,(acc_orig-acc_eps)(atk_orig-atk_base)))
// with the corner conventions: numerator <= 0 -> 0 (including 0/0), positive
// numerator over non-positive denominator -> 2.
double phi(const PhiInputs& inputs);

}  // namespace vaedp

#endif  // VAEDP_TRADEOFF_HPP_

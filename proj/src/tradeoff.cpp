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

#include "vaedp/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "vaedp/error.hpp"

namespace vaedp {
namespace {

// Mean cross-entropy of the softmax net over a labeled dataset.
double cross_entropy(const DenseNet& net, const Dataset& data) {
  const Tensor probs = forward(net, data.features);
  double ce = 0.0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    ce += -std::log(std::max(probs.at(r, static_cast<std::size_t>(data.labels[r])),
                             1e-300));
  }
  return ce / static_cast<double>(data.size());
}

}  // namespace

double classifier_accuracy(const DenseNet& net, const Dataset& data) {
  if (data.size() == 0) throw ParamError("classifier_accuracy: empty dataset");
  const Tensor probs = forward(net, data.features);
  std::size_t correct = 0;
  const std::size_t c = probs.cols();
  for (std::size_t r = 0; r < data.size(); ++r) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < c; ++j) {
      if (probs.at(r, j) > probs.at(r, best)) best = j;
    }
    if (static_cast<int>(best) == data.labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

ClassifierResult train_target_classifier(const Dataset& gen_data,
                                         const Dataset& test_data,
                                         const ClassifierConfig& config, Rng& rng) {
  if (gen_data.size() == 0 || test_data.size() == 0) {
    throw ParamError("classifier: datasets must be non-empty");
  }
  std::set<int> classes(gen_data.labels.begin(), gen_data.labels.end());
  if (classes.size() < 2) {
    throw DegenerateDataError("classifier: training data has a single class");
  }
  const std::size_t class_count = static_cast<std::size_t>(
      *std::max_element(gen_data.labels.begin(), gen_data.labels.end())) + 1;

  Rng init_rng = rng.split("cls_init");
  DenseNet net = make_dense_net(gen_data.dim(), config.hidden, class_count,
                                Activation::kLeakyRelu, Activation::kSoftmax,
                                init_rng);
  std::vector<Tensor*> params = net_params(net);
  std::vector<const Tensor*> cparams(params.begin(), params.end());
  AdamState adam(config.adam, cparams, net_param_names(net, "cls"));

  const std::size_t n = gen_data.size();
  const std::size_t batch = std::max<std::size_t>(1, std::min(config.batch_size, n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_root = rng.split("cls_shuffle");

  double best_loss = std::numeric_limits<double>::infinity();
  DenseNet best_net = net;
  std::size_t since_best = 0;
  std::size_t epochs_trained = 0;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    Rng shuffle_rng = shuffle_root.split(epoch);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.next_u64() % i]);
    }
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      const std::size_t rows = stop - start;
      Tensor x = Tensor::zeros({rows, gen_data.dim()});
      std::vector<int> y(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t idx = order[start + r];
        std::copy(gen_data.features.data.begin() + idx * gen_data.dim(),
                  gen_data.features.data.begin() + (idx + 1) * gen_data.dim(),
                  x.data.begin() + r * gen_data.dim());
        y[r] = gen_data.labels[idx];
      }
      ForwardTrace trace;
      const Tensor probs = forward(net, x, trace);
      // d mean-CE / d probs, softmax Jacobian handled by the net backward.
      Tensor dprobs = Tensor::zeros(probs.shape);
      const double inv_rows = 1.0 / static_cast<double>(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        const double p = std::max(probs.at(r, static_cast<std::size_t>(y[r])), 1e-12);
        dprobs.at(r, static_cast<std::size_t>(y[r])) = -inv_rows / p;
      }
      ParamGrads grads = backward(net, trace, dprobs);
      std::vector<Tensor> flat;
      for (std::size_t li = 0; li < net.layers.size(); ++li) {
        flat.push_back(std::move(grads.dw[li]));
        flat.push_back(std::move(grads.db[li]));
      }
      adam.step(params, flat);
    }
    epochs_trained = epoch + 1;

    const double heldout = cross_entropy(net, test_data);
    if (heldout < best_loss - 1e-12) {
      best_loss = heldout;
      best_net = net;
      since_best = 0;
    } else {
      since_best += 1;
      if (since_best >= config.patience) break;
    }
  }

  ClassifierResult result;
  result.net = std::move(best_net);
  result.test_accuracy = classifier_accuracy(result.net, test_data);
  result.epochs_trained = epochs_trained;
  result.best_heldout_loss = best_loss;
  return result;
}

double phi(const PhiInputs& in) {
  for (double v : {in.atk_orig, in.atk_eps, in.atk_base, in.acc_orig, in.acc_eps,
                   in.acc_base}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParamError("phi: inputs must lie in [0,1]");
    }
  }
  const double numerator =
      std::max(0.0, (in.atk_orig - in.atk_eps) * (in.acc_orig - in.acc_base));
  const double denominator =
      std::max(0.0, (in.acc_orig - in.acc_eps) * (in.atk_orig - in.atk_base));
  if (numerator <= 0.0) return 0.0;
  if (denominator <= 0.0) return 2.0;
  return std::min(2.0, numerator / denominator);
}

}  // namespace vaedp

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

#ifndef VAEDP_NET_HPP_
#define VAEDP_NET_HPP_

#include <string>
#include <vector>

#include "vaedp/rng.hpp"
#include "vaedp/tensor.hpp"

namespace vaedp {

enum class Activation { kIdentity, kRelu, kLeakyRelu, kTanh, kSigmoid, kSoftmax };

Activation activation_from_name(const std::string& name);
const char* activation_name(Activation act);

struct Layer {
  Tensor w;  // {in, out}
  Tensor b;  // {out}
  Activation act = Activation::kIdentity;
  double leaky_slope = 0.2;

  std::size_t in_dim() const { return w.shape[0]; }
  std::size_t out_dim() const { return w.shape[1]; }
};

// Plain fully-connected stack. Consecutive layer dimensions must compose;
// leaky slopes must lie in (0,1). validate() enforces both.
struct DenseNet {
  std::vector<Layer> layers;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t param_count() const;
  void validate() const;
};

// He-style initialization, deterministic in rng.
DenseNet make_dense_net(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                        std::size_t output_dim, Activation hidden_act,
                        Activation output_act, Rng& rng, double leaky_slope = 0.2);

// Intermediates retained by a traced forward pass; backward consumes them.
struct ForwardTrace {
  Tensor input;                // {B, in}
  std::vector<Tensor> pre;     // pre-activation per layer, {B, out_l}
  std::vector<Tensor> post;    // post-activation per layer
  bool valid = false;
};

// Batched along the leading dimension; a 1-D input is treated as batch 1.
// Output elements are checked finite.
Tensor forward(const DenseNet& net, const Tensor& x);
Tensor forward(const DenseNet& net, const Tensor& x, ForwardTrace& trace);

// Gradients of a scalar loss w.r.t. every parameter plus the input, given
// d loss / d output for the traced batch. Layer order matches net.layers.
struct ParamGrads {
  std::vector<Tensor> dw;
  std::vector<Tensor> db;
  Tensor dx;
};

// Throws StateError when `trace` does not come from a forward pass over this
// net. The batch dimension is summed into dw/db (callers bake any 1/B into
// dloss_dout).
ParamGrads backward(const DenseNet& net, const ForwardTrace& trace,
                    const Tensor& dloss_dout);

// Per-example gradients: replays backward once per batch row. Entry i is the
// gradient of row i's loss given dloss_dout row i.
std::vector<ParamGrads> backward_per_example(const DenseNet& net,
                                             const ForwardTrace& trace,
                                             const Tensor& dloss_dout);

// Flat parameter plumbing used by the optimizers and checkpoints.
std::vector<Tensor*> net_params(DenseNet& net);
std::vector<const Tensor*> net_params(const DenseNet& net);
std::vector<std::string> net_param_names(const DenseNet& net, const std::string& prefix);

}  // namespace vaedp

#endif  // VAEDP_NET_HPP_

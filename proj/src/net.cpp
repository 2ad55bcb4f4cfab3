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

#include "vaedp/net.hpp"

#include <algorithm>
#include <cmath>

#include "vaedp/error.hpp"
#include "vaedp/kernels.hpp"

namespace vaedp {
namespace {

// Treats 1-D tensors as a single-row batch.
Tensor as_batch(const Tensor& x) {
  if (x.shape.size() == 1) {
    Tensor t = x;
    t.shape = {1, x.shape[0]};
    return t;
  }
  if (x.shape.size() == 2) return x;
  throw ParamError("forward: input must be 1-D or 2-D");
}

void apply_activation(Activation act, double leaky_slope, Tensor& t) {
  double* v = t.data.data();
  const std::size_t n = t.numel();
  switch (act) {
    case Activation::kIdentity:
      return;
    case Activation::kRelu:
      for (std::size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
      return;
    case Activation::kLeakyRelu:
      for (std::size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : leaky_slope * v[i];
      return;
    case Activation::kTanh:
      for (std::size_t i = 0; i < n; ++i) v[i] = std::tanh(v[i]);
      return;
    case Activation::kSigmoid:
      for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / (1.0 + std::exp(-v[i]));
      return;
    case Activation::kSoftmax: {
      const std::size_t rows = t.rows(), cols = t.cols();
      for (std::size_t r = 0; r < rows; ++r) {
        double* row = v + r * cols;
        double mx = row[0];
        for (std::size_t j = 1; j < cols; ++j) mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
          row[j] = std::exp(row[j] - mx);
          sum += row[j];
        }
        for (std::size_t j = 0; j < cols; ++j) row[j] /= sum;
      }
      return;
    }
  }
}

// d post / d pre evaluated from the traced tensors, times upstream grad.
// softmax needs the full row Jacobian; everything else is elementwise.
Tensor activation_backward(Activation act, double leaky_slope, const Tensor& pre,
                           const Tensor& post, const Tensor& dpost) {
  Tensor dpre = dpost;
  const std::size_t n = dpre.numel();
  switch (act) {
    case Activation::kIdentity:
      return dpre;
    case Activation::kRelu:
      for (std::size_t i = 0; i < n; ++i)
        if (pre.data[i] <= 0.0) dpre.data[i] = 0.0;
      return dpre;
    case Activation::kLeakyRelu:
      for (std::size_t i = 0; i < n; ++i)
        if (pre.data[i] <= 0.0) dpre.data[i] *= leaky_slope;
      return dpre;
    case Activation::kTanh:
      for (std::size_t i = 0; i < n; ++i)
        dpre.data[i] *= 1.0 - post.data[i] * post.data[i];
      return dpre;
    case Activation::kSigmoid:
      for (std::size_t i = 0; i < n; ++i)
        dpre.data[i] *= post.data[i] * (1.0 - post.data[i]);
      return dpre;
    case Activation::kSoftmax: {
      const std::size_t rows = post.rows(), cols = post.cols();
      for (std::size_t r = 0; r < rows; ++r) {
        const double* p = post.data.data() + r * cols;
        const double* g = dpost.data.data() + r * cols;
        double gp = 0.0;
        for (std::size_t j = 0; j < cols; ++j) gp += g[j] * p[j];
        double* out = dpre.data.data() + r * cols;
        for (std::size_t j = 0; j < cols; ++j) out[j] = p[j] * (g[j] - gp);
      }
      return dpre;
    }
  }
  return dpre;
}

}  // namespace

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kRelu;
  if (name == "leaky_relu") return Activation::kLeakyRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "softmax") return Activation::kSoftmax;
  throw ParamError("unknown activation: " + name);
}

const char* activation_name(Activation act) {
  switch (act) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kLeakyRelu: return "leaky_relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kSoftmax: return "softmax";
  }
  return "identity";
}

std::size_t DenseNet::input_dim() const {
  if (layers.empty()) throw ConfigError("net has no layers");
  return layers.front().in_dim();
}

std::size_t DenseNet::output_dim() const {
  if (layers.empty()) throw ConfigError("net has no layers");
  return layers.back().out_dim();
}

std::size_t DenseNet::param_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) n += l.w.numel() + l.b.numel();
  return n;
}

void DenseNet::validate() const {
  if (layers.empty()) throw ConfigError("net has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    if (l.w.shape.size() != 2 || l.b.shape.size() != 1 ||
        l.b.shape[0] != l.w.shape[1]) {
      throw ConfigError("layer " + std::to_string(i) + ": malformed shapes");
    }
    if (l.act == Activation::kLeakyRelu &&
        !(l.leaky_slope > 0.0 && l.leaky_slope < 1.0)) {
      throw ConfigError("layer " + std::to_string(i) + ": leaky slope must be in (0,1)");
    }
    if (i + 1 < layers.size() && l.out_dim() != layers[i + 1].in_dim()) {
      throw ConfigError("layer dimensions do not compose at layer " + std::to_string(i));
    }
  }
}

DenseNet make_dense_net(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                        std::size_t output_dim, Activation hidden_act,
                        Activation output_act, Rng& rng, double leaky_slope) {
  DenseNet net;
  std::vector<std::size_t> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(output_dim);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    Layer l;
    l.w = Tensor::zeros({dims[i], dims[i + 1]});
    l.b = Tensor::zeros({dims[i + 1]});
    const double sd = std::sqrt(2.0 / static_cast<double>(dims[i]));
    for (double& v : l.w.data) v = sd * rng.normal();
    l.act = (i + 2 == dims.size()) ? output_act : hidden_act;
    l.leaky_slope = leaky_slope;
    net.layers.push_back(std::move(l));
  }
  net.validate();
  return net;
}

Tensor forward(const DenseNet& net, const Tensor& x) {
  ForwardTrace trace;
  return forward(net, x, trace);
}

Tensor forward(const DenseNet& net, const Tensor& x, ForwardTrace& trace) {
  net.validate();
  Tensor h = as_batch(x);
  if (h.cols() != net.input_dim()) {
    throw ConfigError("forward: input dim " + std::to_string(h.cols()) +
                      " does not match net input dim " +
                      std::to_string(net.input_dim()));
  }
  const auto& k = kernels::active();
  trace.input = h;
  trace.pre.clear();
  trace.post.clear();
  const std::size_t batch = h.rows();
  for (const Layer& l : net.layers) {
    Tensor z = Tensor::zeros({batch, l.out_dim()});
    k.matmul(h.data.data(), l.w.data.data(), z.data.data(), batch, l.in_dim(),
             l.out_dim());
    for (std::size_t r = 0; r < batch; ++r) {
      k.axpy(1.0, l.b.data.data(), z.data.data() + r * l.out_dim(), l.out_dim());
    }
    trace.pre.push_back(z);
    apply_activation(l.act, l.leaky_slope, z);
    trace.post.push_back(z);
    h = std::move(z);
  }
  trace.valid = true;
  h.check_finite("forward output");
  return h;
}

ParamGrads backward(const DenseNet& net, const ForwardTrace& trace,
                    const Tensor& dloss_dout) {
  if (!trace.valid || trace.post.size() != net.layers.size()) {
    throw StateError("backward called without a matching forward trace");
  }
  if (!same_shape(dloss_dout, trace.post.back())) {
    throw ParamError("backward: loss gradient shape mismatch");
  }
  const auto& k = kernels::active();
  const std::size_t batch = trace.input.rows();

  ParamGrads grads;
  grads.dw.resize(net.layers.size());
  grads.db.resize(net.layers.size());

  Tensor dpost = dloss_dout;
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const Layer& l = net.layers[li];
    Tensor dpre = activation_backward(l.act, l.leaky_slope, trace.pre[li],
                                      trace.post[li], dpost);
    const Tensor& layer_in = li == 0 ? trace.input : trace.post[li - 1];

    // dW = in^T @ dpre, db = column sum of dpre.
    Tensor dw = Tensor::zeros({l.in_dim(), l.out_dim()});
    k.matmul_at(layer_in.data.data(), dpre.data.data(), dw.data.data(),
                l.in_dim(), batch, l.out_dim());
    Tensor db = Tensor::zeros({l.out_dim()});
    for (std::size_t r = 0; r < batch; ++r) {
      k.axpy(1.0, dpre.data.data() + r * l.out_dim(), db.data.data(), l.out_dim());
    }
    grads.dw[li] = std::move(dw);
    grads.db[li] = std::move(db);

    // d input = dpre @ W^T
    Tensor din = Tensor::zeros({batch, l.in_dim()});
    k.matmul_bt(dpre.data.data(), l.w.data.data(), din.data.data(), batch,
                l.out_dim(), l.in_dim());
    dpost = std::move(din);
  }
  grads.dx = std::move(dpost);
  return grads;
}

std::vector<ParamGrads> backward_per_example(const DenseNet& net,
                                             const ForwardTrace& trace,
                                             const Tensor& dloss_dout) {
  if (!trace.valid || trace.post.size() != net.layers.size()) {
    throw StateError("backward called without a matching forward trace");
  }
  const std::size_t batch = trace.input.rows();
  std::vector<ParamGrads> out;
  out.reserve(batch);
  for (std::size_t r = 0; r < batch; ++r) {
    ForwardTrace row;
    row.input = trace.input.row_copy(r);
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
      row.pre.push_back(trace.pre[li].row_copy(r));
      row.post.push_back(trace.post[li].row_copy(r));
    }
    row.valid = true;
    out.push_back(backward(net, row, dloss_dout.row_copy(r)));
  }
  return out;
}

std::vector<Tensor*> net_params(DenseNet& net) {
  std::vector<Tensor*> out;
  for (Layer& l : net.layers) {
    out.push_back(&l.w);
    out.push_back(&l.b);
  }
  return out;
}

std::vector<const Tensor*> net_params(const DenseNet& net) {
  std::vector<const Tensor*> out;
  for (const Layer& l : net.layers) {
    out.push_back(&l.w);
    out.push_back(&l.b);
  }
  return out;
}

std::vector<std::string> net_param_names(const DenseNet& net, const std::string& prefix) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    out.push_back(prefix + ".L" + std::to_string(i) + ".w");
    out.push_back(prefix + ".L" + std::to_string(i) + ".b");
  }
  return out;
}

}  // namespace vaedp

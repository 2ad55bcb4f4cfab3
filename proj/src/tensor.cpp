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

#include "vaedp/tensor.hpp"

#include <cmath>

#include "vaedp/error.hpp"

namespace vaedp {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

Tensor::Tensor(std::initializer_list<std::size_t> s, std::vector<double> d)
    : shape(s), data(std::move(d)) {
  if (shape_numel(shape) != data.size()) {
    throw ParamError("tensor: shape does not match data length");
  }
}

Tensor Tensor::zeros(const std::vector<std::size_t>& shape) {
  Tensor t;
  t.shape = shape;
  t.data.assign(shape_numel(shape), 0.0);
  return t;
}

Tensor Tensor::full(const std::vector<std::size_t>& shape, double value) {
  Tensor t;
  t.shape = shape;
  t.data.assign(shape_numel(shape), value);
  return t;
}

Tensor Tensor::row(std::vector<double> values) {
  Tensor t;
  t.shape = {1, values.size()};
  t.data = std::move(values);
  return t;
}

std::size_t Tensor::rows() const {
  if (shape.size() != 2) throw ParamError("tensor: rows() needs a 2-D tensor");
  return shape[0];
}

std::size_t Tensor::cols() const {
  if (shape.size() != 2) throw ParamError("tensor: cols() needs a 2-D tensor");
  return shape[1];
}

double& Tensor::at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }

double Tensor::at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

Tensor Tensor::row_copy(std::size_t r) const {
  const std::size_t n = cols();
  Tensor t;
  t.shape = {1, n};
  t.data.assign(data.begin() + r * n, data.begin() + (r + 1) * n);
  return t;
}

bool Tensor::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::check_finite(const std::string& what) const {
  if (!all_finite()) {
    throw NumericError("non-finite value in " + what);
  }
}

bool same_shape(const Tensor& a, const Tensor& b) { return a.shape == b.shape; }

Tensor gaussian_sample(Rng& rng, const std::vector<std::size_t>& shape) {
  Tensor t = Tensor::zeros(shape);
  for (double& v : t.data) v = rng.normal();
  return t;
}

Tensor laplace_sample(Rng& rng, double scale, const std::vector<std::size_t>& shape) {
  Tensor t = Tensor::zeros(shape);
  for (double& v : t.data) v = rng.laplace(scale);
  return t;
}

}  // namespace vaedp

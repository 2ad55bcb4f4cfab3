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

#ifndef VAEDP_TENSOR_HPP_
#define VAEDP_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "vaedp/rng.hpp"

namespace vaedp {

// Dense row-major array of 64-bit floats. The carrier for data, weights and
// gradients everywhere in this project.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::initializer_list<std::size_t> s, std::vector<double> d);

  static Tensor zeros(const std::vector<std::size_t>& shape);
  static Tensor full(const std::vector<std::size_t>& shape, double value);
  static Tensor row(std::vector<double> values);  // shape {1, n}

  std::size_t numel() const { return data.size(); }
  bool empty() const { return data.empty(); }

  // 2-D accessors. Throw ParamError when the tensor is not 2-D.
  std::size_t rows() const;
  std::size_t cols() const;
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;

  // View of row r of a 2-D tensor as a {1, cols} tensor (copies).
  Tensor row_copy(std::size_t r) const;

  bool all_finite() const;
  // Throws NumericError mentioning `what` if any element is NaN/Inf.
  void check_finite(const std::string& what) const;
};

std::size_t shape_numel(const std::vector<std::size_t>& shape);
bool same_shape(const Tensor& a, const Tensor& b);

// I.i.d. draws from the named distribution, consumed from rng in row-major
// order.
Tensor gaussian_sample(Rng& rng, const std::vector<std::size_t>& shape);
Tensor laplace_sample(Rng& rng, double scale, const std::vector<std::size_t>& shape);

}  // namespace vaedp

#endif  // VAEDP_TENSOR_HPP_

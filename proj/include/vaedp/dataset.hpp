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

#ifndef VAEDP_DATASET_HPP_
#define VAEDP_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vaedp/rng.hpp"
#include "vaedp/tensor.hpp"

namespace vaedp {

struct Dataset {
  Tensor features;                        // {n, d}, rows flattened row-major
  std::vector<int> labels;                // size n; -1 marks unlabeled
  std::vector<std::int64_t> ids;          // stable record ids from the source
  std::vector<std::size_t> record_shape;  // e.g. {16,16} or {timesteps,channels}
  int class_count = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return size() == 0 ? 0 : features.cols(); }
  bool labeled() const;
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

struct SplitResult {
  Dataset train, val, test;
  bool stratified = false;
  std::string warning;  // set when stratification fell back
};

// Shuffles with the seed, then partitions into disjoint, exhaustive splits,
// stratified by label when labels are present and every class has at least
// as many records as split parts.
SplitResult split_dataset(const Dataset& data, double train_frac, double val_frac,
                          double test_frac, std::uint64_t seed);

// ----- Synthetic generators (desk-scale stand-ins for the reference data) --

struct BlobImagesSpec {
  int classes = 4;
  std::size_t records = 400;
  std::size_t rows = 16;
  std::size_t cols = 16;
  double noise = 0.15;  // per-pixel Gaussian noise before clamping to [0,1]
};

// Balanced classes of blurred-blob template images plus pixel noise,
// values in [0,1]. A nearest-template classifier separates clean samples.
Dataset synth_blob_images(const BlobImagesSpec& spec, Rng& rng);

// The class templates themselves, one {rows*cols} tensor per class.
std::vector<Tensor> blob_image_templates(const BlobImagesSpec& spec, Rng& rng);

struct ToySeriesSpec {
  int classes = 3;
  std::size_t records = 300;
  std::size_t timesteps = 32;
  std::size_t channels = 2;
  double noise = 0.1;
};

// Multi-channel sinusoid/step patterns per class, values in [-1,1], shape
// (n, timesteps, channels) flattened row-major.
Dataset synth_toy_series(const ToySeriesSpec& spec, Rng& rng);

// ----- File formats -----

// CSV: header "label,f0,f1,...", one record per row.
void save_dataset_csv(const Dataset& data, const std::string& path);
Dataset load_dataset_csv(const std::string& path,
                         const std::vector<std::size_t>& record_shape = {});

// Binary container: one line of JSON manifest
// {"format","shape","dtype":"f64le","label_offset"} followed by a raw
// little-endian f64 blob (features then labels; label_offset is the byte
// offset of the labels within the blob).
void save_dataset_container(const Dataset& data, const std::string& path);
Dataset load_dataset_container(const std::string& path);

}  // namespace vaedp

#endif  // VAEDP_DATASET_HPP_

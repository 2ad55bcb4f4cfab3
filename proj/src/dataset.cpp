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

#include "vaedp/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "vaedp/checkpoint.hpp"
#include "vaedp/error.hpp"

namespace vaedp {

bool Dataset::labeled() const {
  if (labels.empty()) return false;
  for (int l : labels) {
    if (l < 0) return false;
  }
  return true;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.record_shape = record_shape;
  out.class_count = class_count;
  out.features = Tensor::zeros({indices.size(), dim()});
  out.labels.reserve(indices.size());
  out.ids.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t src = indices[r];
    std::copy(features.data.begin() + src * dim(),
              features.data.begin() + (src + 1) * dim(),
              out.features.data.begin() + r * dim());
    out.labels.push_back(labels[src]);
    out.ids.push_back(ids[src]);
  }
  return out;
}

namespace {

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.next_u64() % i]);
  }
}

// Cumulative-fraction boundaries; exact when fractions*n are integral.
std::array<std::size_t, 2> split_points(std::size_t n, double f1, double f2) {
  const std::size_t a = static_cast<std::size_t>(
      std::floor(f1 * static_cast<double>(n) + 1e-9));
  const std::size_t b = static_cast<std::size_t>(
      std::floor((f1 + f2) * static_cast<double>(n) + 1e-9));
  return {a, b};
}

}  // namespace

SplitResult split_dataset(const Dataset& data, double train_frac, double val_frac,
                          double test_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && val_frac > 0.0 && test_frac > 0.0)) {
    throw ParamError("split: every fraction must be positive");
  }
  if (std::fabs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
    throw ParamError("split: fractions must sum to 1");
  }
  if (data.size() < 3) throw ParamError("split: need at least 3 records");

  Rng rng = Rng(seed).split("dataset_split");
  SplitResult out;

  bool stratified = data.labeled();
  std::map<int, std::size_t> class_counts;
  if (stratified) {
    for (int l : data.labels) class_counts[l] += 1;
    for (const auto& [label, count] : class_counts) {
      if (count < 3) {
        stratified = false;
        out.warning = "class " + std::to_string(label) +
                      " has fewer records than split parts; falling back to "
                      "unstratified split";
        break;
      }
    }
  }
  out.stratified = stratified;

  std::vector<std::size_t> train_idx, val_idx, test_idx;
  if (stratified) {
    for (const auto& [label, count] : class_counts) {
      (void)count;
      std::vector<std::size_t> pool;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.labels[i] == label) pool.push_back(i);
      }
      shuffle_indices(pool, rng);
      const auto [a, b] = split_points(pool.size(), train_frac, val_frac);
      train_idx.insert(train_idx.end(), pool.begin(), pool.begin() + a);
      val_idx.insert(val_idx.end(), pool.begin() + a, pool.begin() + b);
      test_idx.insert(test_idx.end(), pool.begin() + b, pool.end());
    }
  } else {
    std::vector<std::size_t> pool(data.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    shuffle_indices(pool, rng);
    const auto [a, b] = split_points(pool.size(), train_frac, val_frac);
    train_idx.assign(pool.begin(), pool.begin() + a);
    val_idx.assign(pool.begin() + a, pool.begin() + b);
    test_idx.assign(pool.begin() + b, pool.end());
  }

  out.train = data.subset(train_idx);
  out.val = data.subset(val_idx);
  out.test = data.subset(test_idx);
  return out;
}

std::vector<Tensor> blob_image_templates(const BlobImagesSpec& spec, Rng& rng) {
  std::vector<Tensor> templates;
  for (int c = 0; c < spec.classes; ++c) {
    Rng trng = rng.split("template").split(static_cast<std::uint64_t>(c));
    Tensor t = Tensor::zeros({spec.rows * spec.cols});
    // Three soft bumps per class at class-specific positions.
    for (int bump = 0; bump < 3; ++bump) {
      const double cr = 2.0 + trng.uniform() * (static_cast<double>(spec.rows) - 4.0);
      const double cc = 2.0 + trng.uniform() * (static_cast<double>(spec.cols) - 4.0);
      const double amp = 0.6 + 0.4 * trng.uniform();
      const double radius = 1.5 + 1.5 * trng.uniform();
      for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t col = 0; col < spec.cols; ++col) {
          const double dr = static_cast<double>(r) - cr;
          const double dc = static_cast<double>(col) - cc;
          t.data[r * spec.cols + col] +=
              amp * std::exp(-(dr * dr + dc * dc) / (2.0 * radius * radius));
        }
      }
    }
    for (double& v : t.data) v = std::min(1.0, v);
    templates.push_back(std::move(t));
  }
  return templates;
}

Dataset synth_blob_images(const BlobImagesSpec& spec, Rng& rng) {
  if (spec.classes < 1 || spec.records == 0) {
    throw ParamError("blob-images: classes and records must be positive");
  }
  const std::vector<Tensor> templates = blob_image_templates(spec, rng);
  const std::size_t d = spec.rows * spec.cols;
  Dataset out;
  out.record_shape = {spec.rows, spec.cols};
  out.class_count = spec.classes;
  out.features = Tensor::zeros({spec.records, d});
  for (std::size_t i = 0; i < spec.records; ++i) {
    const int label = static_cast<int>(i % static_cast<std::size_t>(spec.classes));
    Rng rec_rng = rng.split("record").split(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double v = templates[label].data[j] + spec.noise * rec_rng.normal();
      out.features.at(i, j) = std::clamp(v, 0.0, 1.0);
    }
    out.labels.push_back(label);
    out.ids.push_back(static_cast<std::int64_t>(i));
  }
  return out;
}

Dataset synth_toy_series(const ToySeriesSpec& spec, Rng& rng) {
  if (spec.classes < 1 || spec.records == 0 || spec.channels == 0) {
    throw ParamError("toy-series: classes, records and channels must be positive");
  }
  const std::size_t d = spec.timesteps * spec.channels;
  Dataset out;
  out.record_shape = {spec.timesteps, spec.channels};
  out.class_count = spec.classes;
  out.features = Tensor::zeros({spec.records, d});

  // Class patterns: per-channel sinusoids with class-specific frequency and
  // phase; odd classes add a mid-series step.
  std::vector<std::vector<double>> patterns;
  for (int c = 0; c < spec.classes; ++c) {
    Rng prng = rng.split("pattern").split(static_cast<std::uint64_t>(c));
    std::vector<double> p(d, 0.0);
    for (std::size_t ch = 0; ch < spec.channels; ++ch) {
      const double freq = 1.0 + static_cast<double>((c + static_cast<int>(ch)) % 4);
      const double phase = 2.0 * M_PI * prng.uniform();
      const double amp = 0.5 + 0.4 * prng.uniform();
      const double step_level = (c % 2 == 1) ? 0.3 : 0.0;
      for (std::size_t t = 0; t < spec.timesteps; ++t) {
        double v = amp * std::sin(2.0 * M_PI * freq * static_cast<double>(t) /
                                      static_cast<double>(spec.timesteps) +
                                  phase);
        if (t >= spec.timesteps / 2) v += step_level;
        p[t * spec.channels + ch] = std::clamp(v, -1.0, 1.0);
      }
    }
    patterns.push_back(std::move(p));
  }

  for (std::size_t i = 0; i < spec.records; ++i) {
    const int label = static_cast<int>(i % static_cast<std::size_t>(spec.classes));
    Rng rec_rng = rng.split("record").split(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double v = patterns[label][j] + spec.noise * rec_rng.normal();
      out.features.at(i, j) = std::clamp(v, -1.0, 1.0);
    }
    out.labels.push_back(label);
    out.ids.push_back(static_cast<std::int64_t>(i));
  }
  return out;
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "label";
  for (std::size_t j = 0; j < data.dim(); ++j) out << ",f" << j;
  out << "\n";
  char buf[40];
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.labels[i];
    for (std::size_t j = 0; j < data.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.features.at(i, j));
      out << ',' << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

Dataset load_dataset_csv(const std::string& path,
                         const std::vector<std::size_t>& record_shape) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV: " + path);

  Dataset out;
  std::vector<double> values;
  std::size_t dim = 0;
  int max_label = -1;
  std::int64_t next_id = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (!std::getline(ss, cell, ',')) continue;
    const int label = std::stoi(cell);
    std::size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++count;
    }
    if (dim == 0) {
      dim = count;
    } else if (count != dim) {
      throw IoError("ragged CSV row in " + path);
    }
    out.labels.push_back(label);
    out.ids.push_back(next_id++);
    max_label = std::max(max_label, label);
  }
  if (out.labels.empty()) throw IoError("CSV has no data rows: " + path);
  out.features = Tensor::zeros({out.labels.size(), dim});
  out.features.data = std::move(values);
  out.features.shape = {out.labels.size(), dim};
  out.class_count = max_label + 1;
  out.record_shape = record_shape.empty() ? std::vector<std::size_t>{dim} : record_shape;
  if (shape_numel(out.record_shape) != dim) {
    throw ParamError("record shape does not match CSV feature count");
  }
  return out;
}

void save_dataset_container(const Dataset& data, const std::string& path) {
  nlohmann::json manifest;
  manifest["format"] = "vaedp-dataset-v1";
  manifest["shape"] = {data.size(), data.dim()};
  manifest["record_shape"] = data.record_shape;
  manifest["dtype"] = "f64le";
  manifest["label_offset"] = data.size() * data.dim() * sizeof(double);
  manifest["class_count"] = data.class_count;

  std::vector<double> blob = data.features.data;
  for (int l : data.labels) blob.push_back(static_cast<double>(l));
  write_manifest_and_blob(manifest, blob, path);
}

Dataset load_dataset_container(const std::string& path) {
  ManifestAndBlob raw = read_manifest_and_blob(path);
  if (raw.manifest.value("format", "") != "vaedp-dataset-v1" ||
      raw.manifest.value("dtype", "") != "f64le") {
    throw IoError("not a vaedp-dataset-v1 container: " + path);
  }
  const std::size_t n = raw.manifest.at("shape")[0].get<std::size_t>();
  const std::size_t d = raw.manifest.at("shape")[1].get<std::size_t>();
  const std::size_t label_offset = raw.manifest.at("label_offset").get<std::size_t>();
  if (label_offset != n * d * sizeof(double) || raw.blob.size() != n * d + n) {
    throw IoError("container blob does not match manifest: " + path);
  }
  Dataset out;
  out.features = Tensor::zeros({n, d});
  std::copy(raw.blob.begin(), raw.blob.begin() + n * d, out.features.data.begin());
  for (std::size_t i = 0; i < n; ++i) {
    out.labels.push_back(static_cast<int>(raw.blob[n * d + i]));
    out.ids.push_back(static_cast<std::int64_t>(i));
  }
  out.class_count = raw.manifest.at("class_count").get<int>();
  out.record_shape = raw.manifest.at("record_shape").get<std::vector<std::size_t>>();
  return out;
}

}  // namespace vaedp

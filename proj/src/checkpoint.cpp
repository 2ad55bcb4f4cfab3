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

#include "vaedp/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "vaedp/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint blobs are little-endian; big-endian hosts are unsupported");

namespace vaedp {

nlohmann::json net_manifest(const DenseNet& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& l : net.layers) {
    layers.push_back({{"in", l.in_dim()},
                      {"out", l.out_dim()},
                      {"act", activation_name(l.act)},
                      {"leaky_slope", l.leaky_slope}});
  }
  return layers;
}

DenseNet net_from_manifest(const nlohmann::json& manifest) {
  DenseNet net;
  for (const auto& jl : manifest) {
    Layer l;
    l.w = Tensor::zeros({jl.at("in").get<std::size_t>(), jl.at("out").get<std::size_t>()});
    l.b = Tensor::zeros({jl.at("out").get<std::size_t>()});
    l.act = activation_from_name(jl.at("act").get<std::string>());
    l.leaky_slope = jl.at("leaky_slope").get<double>();
    net.layers.push_back(std::move(l));
  }
  net.validate();
  return net;
}

void append_net_blob(const DenseNet& net, std::vector<double>& blob) {
  for (const Layer& l : net.layers) {
    blob.insert(blob.end(), l.w.data.begin(), l.w.data.end());
    blob.insert(blob.end(), l.b.data.begin(), l.b.data.end());
  }
}

std::size_t read_net_blob(DenseNet& net, const std::vector<double>& blob,
                          std::size_t offset) {
  for (Layer& l : net.layers) {
    for (Tensor* t : {&l.w, &l.b}) {
      if (offset + t->numel() > blob.size()) {
        throw IoError("checkpoint blob shorter than manifest promises");
      }
      std::copy(blob.begin() + offset, blob.begin() + offset + t->numel(),
                t->data.begin());
      offset += t->numel();
    }
  }
  return offset;
}

void write_manifest_and_blob(const nlohmann::json& manifest,
                             const std::vector<double>& blob, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const std::string line = manifest.dump();
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.put('\n');
  out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path);
}

ManifestAndBlob read_manifest_and_blob(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("missing manifest line: " + path);
  ManifestAndBlob out;
  out.manifest = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (out.manifest.is_discarded()) throw IoError("malformed manifest JSON: " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() % sizeof(double) != 0) {
    throw IoError("blob length is not a multiple of 8: " + path);
  }
  out.blob.resize(bytes.size() / sizeof(double));
  std::memcpy(out.blob.data(), bytes.data(), bytes.size());
  return out;
}

void save_net_checkpoint(const DenseNet& net, std::uint64_t seed, std::uint64_t steps,
                         const std::string& path) {
  nlohmann::json manifest;
  manifest["format"] = "vaedp-net-v1";
  manifest["layers"] = net_manifest(net);
  manifest["seed"] = seed;
  manifest["steps"] = steps;
  std::vector<double> blob;
  append_net_blob(net, blob);
  write_manifest_and_blob(manifest, blob, path);
}

LoadedNet load_net_checkpoint(const std::string& path) {
  ManifestAndBlob raw = read_manifest_and_blob(path);
  if (raw.manifest.value("format", "") != "vaedp-net-v1") {
    throw IoError("not a vaedp-net-v1 checkpoint: " + path);
  }
  LoadedNet out;
  out.net = net_from_manifest(raw.manifest.at("layers"));
  out.seed = raw.manifest.at("seed").get<std::uint64_t>();
  out.steps = raw.manifest.at("steps").get<std::uint64_t>();
  const std::size_t used = read_net_blob(out.net, raw.blob, 0);
  if (used != raw.blob.size()) throw IoError("trailing bytes in checkpoint: " + path);
  return out;
}

}  // namespace vaedp

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

#ifndef VAEDP_CHECKPOINT_HPP_
#define VAEDP_CHECKPOINT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vaedp/net.hpp"

namespace vaedp {

// Checkpoint files are one line of JSON manifest followed by a raw
// little-endian f64 blob of all parameters, concatenated in layer order
// (W then b per layer).

nlohmann::json net_manifest(const DenseNet& net);
DenseNet net_from_manifest(const nlohmann::json& manifest);

void append_net_blob(const DenseNet& net, std::vector<double>& blob);
// Fills the net's parameters from blob starting at offset; returns the new
// offset. Throws IoError when the blob is too short.
std::size_t read_net_blob(DenseNet& net, const std::vector<double>& blob,
                          std::size_t offset);

// Standalone single-net checkpoint with seed and step count.
void save_net_checkpoint(const DenseNet& net, std::uint64_t seed, std::uint64_t steps,
                         const std::string& path);
struct LoadedNet {
  DenseNet net;
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
};
LoadedNet load_net_checkpoint(const std::string& path);

// Low-level helpers shared by all checkpoint writers.
void write_manifest_and_blob(const nlohmann::json& manifest,
                             const std::vector<double>& blob, const std::string& path);
struct ManifestAndBlob {
  nlohmann::json manifest;
  std::vector<double> blob;
};
ManifestAndBlob read_manifest_and_blob(const std::string& path);

}  // namespace vaedp

#endif  // VAEDP_CHECKPOINT_HPP_

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

#ifndef VAEDP_RNG_HPP_
#define VAEDP_RNG_HPP_

#include <cstdint>
#include <string_view>

namespace vaedp {

// Splittable seeded generator (splitmix64 core). Identical seed + identical
// call sequence gives a bit-identical output sequence. `split(label)` derives
// an independent child stream from the *seed* alone, not from the stream
// position, so per-record noise streams do not depend on batch traversal
// order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal draw (Box-Muller; the spare value is cached).
  double normal();

  // Laplace(scale, mu=0) draw via inverse CDF. scale must be > 0.
  double laplace(double scale);

  // Child stream keyed by an integer or string label. Pure function of
  // (seed, label): calling it never advances this stream.
  Rng split(std::uint64_t label) const;
  Rng split(std::string_view label) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vaedp

#endif  // VAEDP_RNG_HPP_

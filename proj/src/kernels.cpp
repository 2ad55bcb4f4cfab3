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

#include "vaedp/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

#include "vaedp/error.hpp"

namespace vaedp::kernels {
namespace {

const Backend* g_forced = nullptr;

const Backend* resolve() {
  if (const char* env = std::getenv("VAEDP_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_backend();
    if (std::strcmp(env, "avx2") == 0) {
      if (const Backend* b = avx2_backend()) return b;
      throw ParamError("VAEDP_KERNELS=avx2 but AVX2 is unavailable");
    }
    throw ParamError(std::string("unknown VAEDP_KERNELS value: ") + env);
  }
  if (const Backend* b = avx2_backend()) return b;
  return &scalar_backend();
}

}  // namespace

const Backend& active() {
  if (g_forced) return *g_forced;
  static const Backend* resolved = resolve();
  return *resolved;
}

void force_backend(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    g_forced = &scalar_backend();
    return;
  }
  if (std::strcmp(name, "avx2") == 0) {
    if (const Backend* b = avx2_backend()) {
      g_forced = b;
      return;
    }
    throw ParamError("avx2 backend unavailable on this CPU");
  }
  throw ParamError(std::string("unknown kernel backend: ") + name);
}

void reset_backend() { g_forced = nullptr; }

}  // namespace vaedp::kernels

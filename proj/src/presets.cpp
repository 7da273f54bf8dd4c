// Copyright 2026 The kih Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kih/presets.hpp"

#include "kih/errors.hpp"

namespace kih {

namespace {

std::vector<std::uint8_t> salt(std::string_view tag) {
  return std::vector<std::uint8_t>(tag.begin(), tag.end());
}

std::vector<Preset> build() {
  std::vector<Preset> out;
  out.push_back({"TOY",
                 Params::make(1, 1ull << 4, 1ull << 2, "balanced:2",
                              salt("kih/preset/TOY")),
                 "single-row smoke-test sizes; every value is printable"});
  out.push_back({"DESK",
                 Params::make(4, 1ull << 16, 1ull << 8, "balanced:8",
                              salt("kih/preset/DESK")),
                 "default working sizes for tests and the CLI"});
  out.push_back({"LARGE",
                 Params::make(16, 1ull << 32, 1ull << 16, "balanced:16",
                              salt("kih/preset/LARGE")),
                 "stress sizes for benchmarks and cache behaviour"});
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> kPresets = build();
  return kPresets;
}

const Preset& preset_by_name(std::string_view name) {
  for (const Preset& p : presets()) {
    if (p.name == name) {
      return p;
    }
  }
  throw FormatError("unknown preset: " + std::string(name));
}

}  // namespace kih

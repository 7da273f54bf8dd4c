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

#ifndef KIH_PRESETS_HPP_
#define KIH_PRESETS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "kih/modmath.hpp"

namespace kih {

// Named parameter sets for testing and benchmarking.
//
//   TOY    n=1,  q=2^4,  p=2^2,  balanced:2
//   DESK   n=4,  q=2^16, p=2^8,  balanced:8
//   LARGE  n=16, q=2^32, p=2^16, balanced:16
//
// None of these are secure instantiations. A hardness-backed deployment
// would need n on the order of e(T) times a soft-polynomial in the
// security parameter and log q proportional to e(T); at these sizes the
// presets are functional-correctness and performance fixtures only.
struct Preset {
  std::string name;
  Params params;
  std::string description;
};

const std::vector<Preset>& presets();
// Case-sensitive lookup; throws FormatError on unknown names. The CLI
// validates names during flag parsing, so it reports unknown presets
// as usage errors before this is reached.
const Preset& preset_by_name(std::string_view name);

}  // namespace kih

#endif  // KIH_PRESETS_HPP_

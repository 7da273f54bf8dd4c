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

#ifndef KIH_ERRORS_HPP_
#define KIH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace kih {

// Base class for all library errors. The CLI maps each subclass to a
// distinct exit code (see tools/kih.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: bad file magic, truncated payloads, unparsable
// descriptors. Exit code 3.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A structural invariant does not hold: dimension or modulus mismatch,
// parameter constraints violated, stale evaluation cache. Exit code 4.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its contract: wrong input length,
// epoch mismatch, unreachable constrained target. Exit code 5.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace kih

#endif  // KIH_ERRORS_HPP_

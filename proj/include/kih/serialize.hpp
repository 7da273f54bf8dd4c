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

#ifndef KIH_SERIALIZE_HPP_
#define KIH_SERIALIZE_HPP_

#include <iosfwd>
#include <string>
#include <string_view>

#include "kih/cprf.hpp"
#include "kih/gadget.hpp"
#include "kih/kihprf.hpp"
#include "kih/modmath.hpp"
#include "kih/ue.hpp"

// Bit-exact binary formats. All integers little-endian, fixed width.
//
//   KIHM  matrix: magic, version u32, rows u64, cols u64, modulus u64,
//         then rows*cols u64 entries. modulus 0 is the sentinel for an
//         integer (decomposition) matrix.
//   KIHP  instance (kind 1: params, A0, A1) or seed (kind 2: params, S).
//   KIHC  constrained key: side, mode, x0, instance digest, value.
//   KIHU  epoch key (kind 1), update token (kind 2), ciphertext
//         (kind 3). Distinct kinds keep keys and tokens unconfusable.
//
// Readers validate magic, version, kind, and every stored invariant
// (entry ranges, dimensions, bit alphabets); violations throw
// FormatError.
namespace kih {

void write_matrix(std::ostream& out, const ModMatrix& m);
ModMatrix read_matrix(std::istream& in);

void write_decomp(std::ostream& out, const Decomp& d);
Decomp read_decomp(std::istream& in);

void write_instance(std::ostream& out, const PrfInstance& inst);
PrfInstance read_instance(std::istream& in);

void write_seed(std::ostream& out, const Params& params, const Seed& seed);
// Returns the seed and the Params block stored with it.
std::pair<Params, Seed> read_seed(std::istream& in);

void write_constrained_key(std::ostream& out, const ConstrainedKey& ck);
ConstrainedKey read_constrained_key(std::istream& in);

void write_epoch_key(std::ostream& out, const Params& params,
                     const EpochKey& ki);
std::pair<Params, EpochKey> read_epoch_key(std::istream& in);

void write_update_token(std::ostream& out, const Params& params,
                        const UpdateToken& tok);
std::pair<Params, UpdateToken> read_update_token(std::istream& in);

void write_ciphertext(std::ostream& out, const Ciphertext& c);
Ciphertext read_ciphertext(std::istream& in);

// File helpers; FormatError on I/O failure.
void save_file(const std::string& path, std::string_view bytes);
std::string load_file(const std::string& path);

}  // namespace kih

#endif  // KIH_SERIALIZE_HPP_

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

#ifndef KIH_UE_HPP_
#define KIH_UE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "kih/kihprf.hpp"

namespace kih {

// Owner-side key for one epoch: the function seed and the nonce.
struct EpochKey {
  std::uint64_t epoch = 0;
  Seed k;
  std::string nonce;  // |T| bits

  bool operator==(const EpochKey&) const = default;
};

// Host-side material for moving ciphertexts from epoch-1 to epoch.
// dk = k_sampled - k_old (entrywise mod q); dn = old_nonce (+) new_nonce.
struct UpdateToken {
  std::uint64_t epoch = 0;  // target epoch
  Seed dk;
  SymbolString dn;

  bool operator==(const UpdateToken&) const = default;
};

// raw: the message is an arbitrary nd x nd matrix mod p; decryption is
// exact at the encryption epoch and shifts by the full update defect
// after rotations. robust: entries live in Z_t and are embedded as
// entry * floor(p/t), so decoding tolerates per-entry error below
// floor(p/t)/2; requires t <= p/4.
enum class MsgMode : std::uint8_t { kRaw = 0, kRobust = 1 };

struct Message {
  MsgMode mode = MsgMode::kRaw;
  std::uint64_t t = 0;  // robust alphabet size; 0 in raw mode
  ModMatrix data;       // mod p in raw mode, mod t in robust mode

  static Message raw(ModMatrix data);
  static Message robust(std::uint64_t t, ModMatrix data);

  bool operator==(const Message&) const = default;
};

struct Ciphertext {
  std::uint64_t epoch = 0;
  std::string data_id;  // |T| bits, shared owner/host identifier
  MsgMode mode = MsgMode::kRaw;
  std::uint64_t t = 0;
  ModMatrix body;  // nd x nd mod p

  bool operator==(const Ciphertext&) const = default;
};

// Epoch 0 key: uniform seed, uniform |T|-bit nonce.
EpochKey ue_setup(const PrfInstance& inst, EntropySource& entropy);

// body = prf_eval_prime(k, data_id, nonce-as-symbols) + encode(m).
// The caller supplies the per-record data id (|T| bits).
Ciphertext ue_enc(const PrfInstance& inst, const EpochKey& ki,
                  const Message& m, std::string_view data_id);

// Inverse of ue_enc under the matching epoch key. Epoch mismatch
// throws PreconditionError. Robust mode decodes each entry to the
// nearest embedded value (wrap-aware) and throws InvariantError if the
// residual reaches half the embedding step.
Message ue_dec(const PrfInstance& inst, const EpochKey& ki,
               const Ciphertext& c);

// Samples k_next and nonce_next; returns the epoch e+1 key and token:
//   token = (k_next - k_e, nonce_e (+) nonce_next)
//   key   = (2*k_e - k_next, nonce_next)
// The stored key seed is deliberately not the sampled k_next; the
// asymmetry is what makes token algebra close: key.k + token.dk = k_e.
std::pair<EpochKey, UpdateToken> ue_next(const PrfInstance& inst,
                                         const EpochKey& ki,
                                         EntropySource& entropy);

// Host-side rotation: body' = body - prf_eval_prime(dk, data_id, dn).
// Pure function of (token, ciphertext, instance); no epoch key enters.
// Requires tok.epoch == c.epoch + 1.
Ciphertext ue_upd(const PrfInstance& inst, const UpdateToken& tok,
                  const Ciphertext& c);

// Message encoding into Z_p (identity in raw mode, scaled embedding in
// robust mode) and its decode half. Exposed for the report harnesses.
ModMatrix encode_message(const Message& m, std::uint64_t p);
Message decode_message(const ModMatrix& residual, MsgMode mode,
                       std::uint64_t t);

}  // namespace kih

#endif  // KIH_UE_HPP_

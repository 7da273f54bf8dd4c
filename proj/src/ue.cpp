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

#include "kih/ue.hpp"

#include <string>

#include "kih/errors.hpp"

namespace kih {

namespace {

void check_epoch_key(const PrfInstance& inst, const EpochKey& ki) {
  if (ki.nonce.size() != inst.half_len()) {
    throw InvariantError("epoch key: nonce has wrong length");
  }
  for (char c : ki.nonce) {
    if (c != '0' && c != '1') {
      throw InvariantError("epoch key: nonce must be a bit string");
    }
  }
}

void check_message_shape(const PrfInstance& inst, const Message& m) {
  const std::uint64_t nd = inst.params().nd();
  if (m.data.rows() != nd || m.data.cols() != nd) {
    throw PreconditionError("message: data must be nd x nd");
  }
}

// Centered distance between v and w mod p.
std::uint64_t wrap_dist(std::uint64_t v, std::uint64_t w, std::uint64_t p) {
  const std::uint64_t diff = v >= w ? v - w : w - v;
  return diff <= p - diff ? diff : p - diff;
}

}  // namespace

Message Message::raw(ModMatrix data) {
  Message m;
  m.mode = MsgMode::kRaw;
  m.t = 0;
  m.data = std::move(data);
  return m;
}

Message Message::robust(std::uint64_t t, ModMatrix data) {
  if (t < 2) {
    throw PreconditionError("robust message: alphabet needs t >= 2");
  }
  if (data.modulus() != t) {
    throw PreconditionError("robust message: data must be reduced mod t");
  }
  Message m;
  m.mode = MsgMode::kRobust;
  m.t = t;
  m.data = std::move(data);
  return m;
}

EpochKey ue_setup(const PrfInstance& inst, EntropySource& entropy) {
  EpochKey ki;
  ki.epoch = 0;
  ki.k = keygen(inst.params(), entropy);
  ki.nonce = entropy.bits(inst.half_len());
  return ki;
}

ModMatrix encode_message(const Message& m, std::uint64_t p) {
  if (m.mode == MsgMode::kRaw) {
    if (m.data.modulus() != p) {
      throw PreconditionError("raw message: data must be reduced mod p");
    }
    return m.data;
  }
  if (m.t < 2 || m.t > p / 4) {
    throw PreconditionError("robust message: need 2 <= t <= p/4");
  }
  if (m.data.modulus() != m.t) {
    throw PreconditionError("robust message: data must be reduced mod t");
  }
  const std::uint64_t delta = p / m.t;
  ModMatrix out(m.data.rows(), m.data.cols(), p);
  for (std::uint64_t i = 0; i < out.rows(); ++i) {
    for (std::uint64_t j = 0; j < out.cols(); ++j) {
      // entry < t and delta = floor(p/t), so entry * delta < p.
      out.set(i, j, m.data.at(i, j) * delta);
    }
  }
  return out;
}

Message decode_message(const ModMatrix& residual, MsgMode mode,
                       std::uint64_t t) {
  if (mode == MsgMode::kRaw) {
    return Message::raw(residual);
  }
  const std::uint64_t p = residual.modulus();
  if (t < 2 || t > p / 4) {
    throw PreconditionError("robust decode: need 2 <= t <= p/4");
  }
  const std::uint64_t delta = p / t;
  ModMatrix data(residual.rows(), residual.cols(), t);
  for (std::uint64_t i = 0; i < residual.rows(); ++i) {
    for (std::uint64_t j = 0; j < residual.cols(); ++j) {
      const std::uint64_t v = residual.at(i, j);
      // Nearest embedded point, wrap-aware: v/delta and its successor
      // bracket v; reducing the successor mod t handles the top arc
      // between (t-1)*delta and p.
      const std::uint64_t k1 = std::min(v / delta, t - 1);
      const std::uint64_t k2 = (k1 + 1) % t;
      const std::uint64_t d1 = wrap_dist(v, k1 * delta, p);
      const std::uint64_t d2 = wrap_dist(v, k2 * delta, p);
      const std::uint64_t best = d1 <= d2 ? k1 : k2;
      const std::uint64_t dmin = d1 <= d2 ? d1 : d2;
      if (2 * dmin >= delta) {
        throw InvariantError(
            "robust decode: residual error reaches half the embedding "
            "step; ciphertext integrity lost");
      }
      data.set(i, j, best);
    }
  }
  return Message::robust(t, data);
}

Ciphertext ue_enc(const PrfInstance& inst, const EpochKey& ki,
                  const Message& m, std::string_view data_id) {
  check_epoch_key(inst, ki);
  check_message_shape(inst, m);
  const ModMatrix pad = prf_eval_prime(inst, ki.k, data_id,
                                       SymbolString::from_bits(ki.nonce));
  Ciphertext c;
  c.epoch = ki.epoch;
  c.data_id = std::string(data_id);
  c.mode = m.mode;
  c.t = m.t;
  c.body = mat_add(pad, encode_message(m, inst.params().p));
  return c;
}

Message ue_dec(const PrfInstance& inst, const EpochKey& ki,
               const Ciphertext& c) {
  check_epoch_key(inst, ki);
  if (ki.epoch != c.epoch) {
    throw PreconditionError("ue_dec: key epoch does not match ciphertext");
  }
  const ModMatrix pad = prf_eval_prime(inst, ki.k, c.data_id,
                                       SymbolString::from_bits(ki.nonce));
  return decode_message(mat_sub(c.body, pad), c.mode, c.t);
}

std::pair<EpochKey, UpdateToken> ue_next(const PrfInstance& inst,
                                         const EpochKey& ki,
                                         EntropySource& entropy) {
  check_epoch_key(inst, ki);
  const Seed sampled = keygen(inst.params(), entropy);
  const std::string next_nonce = entropy.bits(inst.half_len());

  UpdateToken tok;
  tok.epoch = ki.epoch + 1;
  tok.dk = seed_sub(sampled, ki.k);
  tok.dn = almost_xor(ki.nonce, next_nonce);

  // The new epoch seed is 2*k - sampled, not sampled itself: this way
  // newkey.k + tok.dk = k, so token and new key together recover only
  // the outgoing epoch's seed and neither part alone does.
  EpochKey next;
  next.epoch = ki.epoch + 1;
  next.k = seed_sub(seed_add(ki.k, ki.k), sampled);
  next.nonce = next_nonce;
  return {next, tok};
}

Ciphertext ue_upd(const PrfInstance& inst, const UpdateToken& tok,
                  const Ciphertext& c) {
  if (tok.epoch != c.epoch + 1) {
    throw PreconditionError("ue_upd: token targets another epoch");
  }
  if (tok.dn.size() != inst.half_len()) {
    throw InvariantError("ue_upd: token nonce delta has wrong length");
  }
  const ModMatrix mask = prf_eval_prime(inst, tok.dk, c.data_id, tok.dn);
  Ciphertext out = c;
  out.epoch = tok.epoch;
  out.body = mat_sub(c.body, mask);
  return out;
}

}  // namespace kih

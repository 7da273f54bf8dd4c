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

#include "kih/kihprf.hpp"

#include <algorithm>
#include <array>

#include "kih/errors.hpp"

namespace kih {

namespace {

void check_bits(std::string_view bits, std::size_t expected,
                const char* what) {
  if (bits.size() != expected) {
    throw PreconditionError(std::string(what) + ": expected " +
                            std::to_string(expected) + " bits, got " +
                            std::to_string(bits.size()));
  }
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw PreconditionError(std::string(what) +
                              ": input must be over {0,1}");
    }
  }
}

void check_seed(const PrfInstance& inst, const Seed& seed) {
  const Params& params = inst.params();
  if (seed.s.rows() != params.n || seed.s.cols() != params.nd() ||
      seed.s.modulus() != params.q) {
    throw InvariantError("seed: dimensions or modulus do not match params");
  }
}

// Non-cryptographic fingerprint binding a cache to (instance, seed).
// Guards against accidental reuse, not adversaries.
std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t cache_binding(const PrfInstance& inst, const Seed* seed) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : inst.digest()) {
    h = fnv1a(h, static_cast<unsigned char>(c));
  }
  h = fnv1a(h, seed != nullptr ? 1 : 0);
  if (seed != nullptr) {
    for (std::uint64_t e : seed->s.entries()) {
      h = fnv1a(h, e);
    }
  }
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

SymbolString::SymbolString(std::vector<Symbol> symbols)
    : symbols_(std::move(symbols)) {}

SymbolString SymbolString::parse(std::string_view text) {
  std::vector<Symbol> symbols;
  symbols.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '0': symbols.push_back(Symbol::S0); break;
      case '1': symbols.push_back(Symbol::S1); break;
      case 'Z': symbols.push_back(Symbol::SZ); break;
      default:
        throw FormatError("symbol string: characters must be 0, 1 or Z");
    }
  }
  return SymbolString(std::move(symbols));
}

SymbolString SymbolString::from_bits(std::string_view bits) {
  std::vector<Symbol> symbols;
  symbols.reserve(bits.size());
  for (char c : bits) {
    if (c == '0') {
      symbols.push_back(Symbol::S0);
    } else if (c == '1') {
      symbols.push_back(Symbol::S1);
    } else {
      throw FormatError("from_bits: input must be over {0,1}");
    }
  }
  return SymbolString(std::move(symbols));
}

std::size_t SymbolString::bit_length() const {
  std::size_t len = 0;
  for (Symbol s : symbols_) {
    len += s == Symbol::SZ ? 2 : 1;
  }
  return len;
}

std::string SymbolString::render() const {
  std::string out;
  out.reserve(symbols_.size());
  for (Symbol s : symbols_) {
    out.push_back(s == Symbol::S0 ? '0' : (s == Symbol::S1 ? '1' : 'Z'));
  }
  return out;
}

SymbolString almost_xor(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) {
    throw PreconditionError("almost_xor: length mismatch");
  }
  std::vector<Symbol> symbols;
  symbols.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const char x = a[i];
    const char y = b[i];
    if ((x != '0' && x != '1') || (y != '0' && y != '1')) {
      throw PreconditionError("almost_xor: inputs must be over {0,1}");
    }
    if (x == '1' && y == '1') {
      symbols.push_back(Symbol::S0);
    } else if (x == '0' && y == '0') {
      symbols.push_back(Symbol::SZ);
    } else {
      symbols.push_back(Symbol::S1);
    }
  }
  return SymbolString(std::move(symbols));
}

// ---------------------------------------------------------------------------
// Instances and seeds
// ---------------------------------------------------------------------------

PrfInstance::PrfInstance(Params params, ModMatrix a0, ModMatrix a1)
    : params_(std::move(params)),
      tree_(FullBinaryTree::parse(params_.tree_desc)),
      gadget_(params_),
      a0_(std::move(a0)),
      a1_(std::move(a1)) {
  const std::uint64_t nd = params_.nd();
  for (const ModMatrix* m : {&a0_, &a1_}) {
    if (m->rows() != params_.n || m->cols() != nd ||
        m->modulus() != params_.q) {
      throw InvariantError("instance: public matrix dims must be n x nd");
    }
  }
  if (a0_ == a1_) {
    throw InvariantError("instance: A0 and A1 must differ");
  }
  Xof x;
  x.absorb("kih/instance/v1");
  x.absorb_u64(params_.n);
  x.absorb_u64(params_.q);
  x.absorb_u64(params_.p);
  x.absorb_block(params_.tree_desc);
  x.absorb_block(params_.prg_salt);
  for (const ModMatrix* m : {&a0_, &a1_}) {
    for (std::uint64_t e : m->entries()) {
      x.absorb_u64(e);
    }
  }
  std::array<std::uint8_t, 16> raw{};
  x.squeeze(raw);
  static const char* kHex = "0123456789abcdef";
  for (std::uint8_t b : raw) {
    digest_.push_back(kHex[b >> 4]);
    digest_.push_back(kHex[b & 0xf]);
  }
}

PrfInstance sample_instance(const Params& params, EntropySource& entropy) {
  const std::uint64_t nd = params.nd();
  ModMatrix a0 = sample_uniform_matrix(params.n, nd, params.q, entropy);
  ModMatrix a1 = sample_uniform_matrix(params.n, nd, params.q, entropy);
  while (a1 == a0) {
    a1 = sample_uniform_matrix(params.n, nd, params.q, entropy);
  }
  return PrfInstance(params, std::move(a0), std::move(a1));
}

Seed keygen(const Params& params, EntropySource& entropy) {
  return Seed{sample_uniform_matrix(params.n, params.nd(), params.q,
                                    entropy)};
}

Seed seed_add(const Seed& a, const Seed& b) {
  return Seed{mat_add(a.s, b.s)};
}

Seed seed_sub(const Seed& a, const Seed& b) {
  return Seed{mat_sub(a.s, b.s)};
}

DerivedMatrices DerivedMatrices::from(const PrfInstance& inst,
                                      const Seed& seed) {
  check_seed(inst, seed);
  DerivedMatrices d;
  d.b0 = mat_add(inst.a0(), seed.s);
  d.b1 = mat_add(inst.a1(), seed.s);
  d.c0 = mat_add(inst.a1(), d.b1);
  d.c1 = mat_add(inst.a0(), d.b1);
  d.cz = mat_add(inst.a0(), d.b0);
  return d;
}

const ModMatrix& DerivedMatrices::c(Symbol s) const {
  switch (s) {
    case Symbol::S0: return c0;
    case Symbol::S1: return c1;
    default: return cz;
  }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

void EvalCache::reset() {
  bound_ = false;
  binding = 0;
  a_slots.clear();
  b_slots.clear();
  c_slots.clear();
  r0_slot = Slot{};
  last_input_.reset();
  stats_ = EvalStats{};
}

ModMatrix prg_matrix(const PrfInstance& inst, std::string_view left_half) {
  const Params& params = inst.params();
  check_bits(left_half, inst.half_len(), "prg_matrix");
  // Keyed by (salt, left half) plus the output geometry; independent
  // of the instance matrices by design, so distinct instances sharing
  // a salt share the expander.
  Xof x;
  x.absorb("kih/prg-r/v1");
  x.absorb_block(params.prg_salt);
  x.absorb_block(left_half);
  x.absorb_u64(params.n);
  x.absorb_u64(params.d);
  x.absorb_u64(params.q);
  ModMatrix out(params.nd(), params.n, params.q);
  std::uint64_t* po = out.mutable_entries().data();
  const std::size_t count = out.entries().size();
  for (std::size_t i = 0; i < count; ++i) {
    po[i] = x.uniform(params.q);
  }
  return out;
}

// Shared recursion over the three-letter alphabet {0,1,Z}. Leaf values
// come from a per-character table; internal nodes select A_0/A_1 by
// the first character of their segment ('1' picks A_1; '0' and 'Z'
// pick A_0). Node values are memoized per (node, segment) when slots
// are provided. This class is the single friend of EvalCache; every
// cache-touching entry point routes through its static accessors.
class Evaluator {
 public:
  Evaluator(const PrfInstance& inst,
            std::array<const ModMatrix*, 3> leaf_tables,
            std::vector<EvalCache::Slot>* slots, EvalStats* stats)
      : inst_(inst), leaf_tables_(leaf_tables), slots_(slots),
        stats_(stats) {
    if (slots_ != nullptr && slots_->size() != inst.tree().node_count()) {
      slots_->assign(inst.tree().node_count(), EvalCache::Slot{});
    }
  }

  ModMatrix run(std::string_view input) {
    if (stats_ != nullptr) {
      record_max_terms();
    }
    return eval_node(inst_.tree().root(), input);
  }

  // Cache plumbing for the free evaluation functions.
  static EvalStats* bind(EvalCache* cache, const PrfInstance& inst,
                         const Seed* seed) {
    if (cache == nullptr) {
      return nullptr;
    }
    const std::uint64_t fp = cache_binding(inst, seed);
    if (cache->bound_ && cache->binding != fp) {
      throw InvariantError(
          "eval cache: already bound to a different instance or seed");
    }
    cache->bound_ = true;
    cache->binding = fp;
    return &cache->stats_;
  }
  static auto* a_slots(EvalCache* c) {
    return c != nullptr ? &c->a_slots : nullptr;
  }
  static auto* b_slots(EvalCache* c) {
    return c != nullptr ? &c->b_slots : nullptr;
  }
  static auto* c_slots(EvalCache* c) {
    return c != nullptr ? &c->c_slots : nullptr;
  }
  // Returns the memoized R_0 for this left half, refreshing the slot
  // if it held a different segment. Without a cache, computes afresh.
  static ModMatrix r0(const PrfInstance& inst, std::string_view left,
                      EvalCache* cache) {
    if (cache != nullptr && cache->r0_slot.valid &&
        cache->r0_slot.segment == left) {
      return cache->r0_slot.value;
    }
    ModMatrix value = mat_mul(prg_matrix(inst, left),
                              inst.a(left[0] == '1' ? 1 : 0));
    if (cache != nullptr) {
      cache->r0_slot.valid = true;
      cache->r0_slot.segment = std::string(left);
      cache->r0_slot.value = value;
    }
    return value;
  }
  static void remember_input(EvalCache* cache, std::string_view input) {
    if (cache != nullptr) {
      cache->last_input_ = std::string(input);
    }
  }

 private:
  static std::size_t leaf_index(char c) {
    return c == '0' ? 0 : (c == '1' ? 1 : 2);
  }
  static int selector(char c) { return c == '1' ? 1 : 0; }

  // Largest number of summands folded into one node value: 1 at a
  // leaf, the left child's count plus one product at an internal node.
  // The maximum over nodes equals expansion(T) + 1; recorded
  // structurally so tests can pin the identity.
  void record_max_terms() {
    const FullBinaryTree& tree = inst_.tree();
    std::vector<std::size_t> terms(tree.node_count(), 1);
    std::size_t best = 1;
    for (std::size_t i = tree.node_count(); i-- > 0;) {
      const auto id = static_cast<FullBinaryTree::NodeId>(i);
      if (!tree.is_leaf(id)) {
        terms[i] = terms[tree.left(id)] + 1;
        best = std::max(best, terms[i]);
      }
    }
    stats_->max_added_terms = std::max(stats_->max_added_terms, best);
  }

  ModMatrix eval_node(FullBinaryTree::NodeId id, std::string_view full) {
    const FullBinaryTree& tree = inst_.tree();
    const std::string_view seg = full.substr(
        tree.leaf_begin(id), tree.leaf_end(id) - tree.leaf_begin(id));
    if (tree.is_leaf(id)) {
      return *leaf_tables_[leaf_index(seg[0])];
    }
    if (slots_ != nullptr) {
      const EvalCache::Slot& slot = (*slots_)[id];
      if (slot.valid && slot.segment == seg) {
        return slot.value;
      }
    }
    ModMatrix left = eval_node(tree.left(id), full);
    ModMatrix right = eval_node(tree.right(id), full);
    ModMatrix value = mat_add(
        left, mat_mul(inst_.a(selector(seg[0])),
                      mat_decompose(right, inst_.gadget())));
    if (slots_ != nullptr) {
      EvalCache::Slot& slot = (*slots_)[id];
      slot.valid = true;
      slot.segment = std::string(seg);
      slot.value = value;
      if (stats_ != nullptr) {
        ++stats_->recomputed_nodes;
      }
    }
    return value;
  }

  const PrfInstance& inst_;
  std::array<const ModMatrix*, 3> leaf_tables_;
  std::vector<EvalCache::Slot>* slots_;
  EvalStats* stats_;
};

ModMatrix eval_a(const PrfInstance& inst, std::string_view bits,
                 EvalCache* cache) {
  check_bits(bits, inst.half_len(), "eval_a");
  EvalStats* stats = Evaluator::bind(cache, inst, nullptr);
  Evaluator ev(inst, {&inst.a0(), &inst.a1(), nullptr},
               Evaluator::a_slots(cache), stats);
  return ev.run(bits);
}

ModMatrix eval_b(const PrfInstance& inst, const Seed& seed,
                 std::string_view bits, EvalCache* cache) {
  check_bits(bits, inst.half_len(), "eval_b");
  check_seed(inst, seed);
  EvalStats* stats = Evaluator::bind(cache, inst, &seed);
  const DerivedMatrices derived = DerivedMatrices::from(inst, seed);
  Evaluator ev(inst, {&derived.b0, &derived.b1, nullptr},
               Evaluator::b_slots(cache), stats);
  return ev.run(bits);
}

ModMatrix eval_c(const PrfInstance& inst, const Seed& seed,
                 const SymbolString& symbols, EvalCache* cache) {
  if (symbols.size() != inst.half_len()) {
    throw PreconditionError("eval_c: expected one symbol per leaf");
  }
  check_seed(inst, seed);
  EvalStats* stats = Evaluator::bind(cache, inst, &seed);
  const DerivedMatrices derived = DerivedMatrices::from(inst, seed);
  Evaluator ev(inst, {&derived.c0, &derived.c1, &derived.cz},
               Evaluator::c_slots(cache), stats);
  return ev.run(symbols.render());
}

ModMatrix prf_eval(const PrfInstance& inst, const Seed& seed,
                   std::string_view input, EvalCache* cache) {
  const std::size_t half = inst.half_len();
  check_bits(input, 2 * half, "prf_eval");
  check_seed(inst, seed);
  const std::string_view lh = input.substr(0, half);
  const std::string_view rh = input.substr(half);

  EvalStats* stats = Evaluator::bind(cache, inst, &seed);
  if (stats != nullptr) {
    stats->recomputed_nodes = 0;
  }

  Evaluator ea(inst, {&inst.a0(), &inst.a1(), nullptr},
               Evaluator::a_slots(cache), stats);
  ModMatrix a_t = ea.run(lh);

  const DerivedMatrices derived = DerivedMatrices::from(inst, seed);
  Evaluator eb(inst, {&derived.b0, &derived.b1, nullptr},
               Evaluator::b_slots(cache), stats);
  ModMatrix b_t = eb.run(rh);

  ModMatrix r0 = Evaluator::r0(inst, lh, cache);
  ModMatrix acc = mat_add(
      mat_mul(transpose(seed.s), a_t),
      mat_mul(r0, mat_decompose(b_t, inst.gadget())));
  Evaluator::remember_input(cache, input);
  return round_matrix(acc, inst.params().p);
}

ModMatrix prf_eval_prime(const PrfInstance& inst, const Seed& seed,
                         std::string_view z0, const SymbolString& z1,
                         EvalCache* cache) {
  const std::size_t half = inst.half_len();
  check_bits(z0, half, "prf_eval_prime");
  if (z1.size() != half) {
    throw PreconditionError("prf_eval_prime: z1 needs one symbol per leaf");
  }
  check_seed(inst, seed);

  EvalStats* stats = Evaluator::bind(cache, inst, &seed);
  if (stats != nullptr) {
    stats->recomputed_nodes = 0;
  }

  Evaluator ea(inst, {&inst.a0(), &inst.a1(), nullptr},
               Evaluator::a_slots(cache), stats);
  ModMatrix a_t = ea.run(z0);

  const DerivedMatrices derived = DerivedMatrices::from(inst, seed);
  Evaluator ec(inst, {&derived.c0, &derived.c1, &derived.cz},
               Evaluator::c_slots(cache), stats);
  ModMatrix c_t = ec.run(z1.render());

  ModMatrix r0 = Evaluator::r0(inst, z0, cache);
  ModMatrix acc = mat_add(
      mat_mul(transpose(seed.s), a_t),
      mat_mul(r0, mat_decompose(c_t, inst.gadget())));
  return round_matrix(acc, inst.params().p);
}

ModMatrix combine(const ModMatrix& o1, const ModMatrix& o2) {
  return mat_add(o1, o2);
}

std::uint64_t homomorphism_defect(const PrfInstance& inst, const Seed& s1,
                                  const Seed& s2, std::string_view x,
                                  std::string_view y) {
  const std::size_t half = inst.half_len();
  check_bits(x, 2 * half, "homomorphism_defect");
  check_bits(y, 2 * half, "homomorphism_defect");
  if (x.substr(0, half) != y.substr(0, half)) {
    throw PreconditionError(
        "homomorphism_defect: inputs must share their left half");
  }
  const SymbolString z1 = almost_xor(x.substr(half), y.substr(half));
  ModMatrix lhs =
      prf_eval_prime(inst, seed_add(s1, s2), x.substr(0, half), z1);
  ModMatrix rhs = combine(prf_eval(inst, s1, x), prf_eval(inst, s2, y));
  return centered_inf_norm(mat_sub(lhs, rhs));
}

ModMatrix eval_incremental(const PrfInstance& inst, const Seed& seed,
                           std::string_view input, std::size_t flipped_index,
                           EvalCache& cache) {
  const std::size_t half = inst.half_len();
  check_bits(input, 2 * half, "eval_incremental");
  check_seed(inst, seed);
  if (flipped_index >= input.size()) {
    throw PreconditionError("eval_incremental: flipped index out of range");
  }
  const std::optional<std::string>& prev = cache.last_input();
  if (!prev.has_value()) {
    throw InvariantError("eval_incremental: cache holds no base evaluation");
  }
  if (prev->size() != input.size()) {
    throw InvariantError("eval_incremental: cached input length differs");
  }
  for (std::size_t i = 0; i < input.size(); ++i) {
    const bool differs = (*prev)[i] != input[i];
    if (differs != (i == flipped_index)) {
      throw InvariantError(
          "eval_incremental: cache input must differ exactly at the "
          "flipped index");
    }
  }
  // The binding re-check inside prf_eval rejects caches populated
  // under a different (instance, seed).
  return prf_eval(inst, seed, input, &cache);
}

}  // namespace kih

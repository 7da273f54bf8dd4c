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

#include "kih/reports.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kih/cprf.hpp"
#include "kih/errors.hpp"
#include "kih/reference.hpp"
#include "kih/serialize.hpp"

namespace kih {

namespace {

std::string pad_u64(std::uint64_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*llu", width,
                static_cast<unsigned long long>(v));
  return buf;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void check_no_newline(std::string_view s, const char* what) {
  if (s.find('\n') != std::string_view::npos) {
    throw InvariantError(std::string("report ") + what +
                         " must not contain newlines");
  }
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Runs `body(i)` for i in [0, trials), optionally across threads. Each
// iteration must touch only its own output slot; determinism comes from
// per-index entropy forks, so the schedule cannot matter. Exceptions
// are captured and rethrown after the loop.
template <typename Body>
void run_trials(std::uint64_t trials, [[maybe_unused]] bool parallel,
                Body&& body) {
  std::atomic<bool> failed{false};
  std::string message;
  const std::int64_t count = static_cast<std::int64_t>(trials);
#pragma omp parallel for if (parallel) schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    if (failed.load(std::memory_order_relaxed)) {
      continue;
    }
    try {
      body(static_cast<std::uint64_t>(i));
    } catch (const std::exception& e) {
      bool expected = false;
      if (failed.compare_exchange_strong(expected, true)) {
#pragma omp critical(kih_report_error)
        message = e.what();
      }
    }
  }
  if (failed.load()) {
    throw InvariantError("report trial failed: " + message);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

void Report::set(std::string_view key, std::string_view value) {
  check_no_newline(key, "key");
  check_no_newline(value, "value");
  if (key.empty()) {
    throw InvariantError("report key must not be empty");
  }
  entries_[std::string(key)] = std::string(value);
}

void Report::set(std::string_view key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void Report::set(std::string_view key, double value) {
  set(key, fixed6(value));
}

const std::string& Report::get(std::string_view key) const {
  auto it = entries_.find(std::string(key));
  if (it == entries_.end()) {
    throw PreconditionError("report has no key: " + std::string(key));
  }
  return it->second;
}

bool Report::has(std::string_view key) const {
  return entries_.count(std::string(key)) != 0;
}

std::string Report::text() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += ": ";
    out += value;
    out += '\n';
  }
  return out;
}

std::string trial_key(std::string_view prefix, std::uint64_t index,
                      std::string_view suffix) {
  return std::string(prefix) + pad_u64(index, 6) + std::string(suffix);
}

// ---------------------------------------------------------------------------
// Combination-gap distribution
// ---------------------------------------------------------------------------

Report defect_report(const Params& params, std::uint64_t trials,
                     EntropySource& entropy, bool parallel) {
  Report r;
  r.set("harness", "defect");
  r.set("params.n", static_cast<std::uint64_t>(params.n));
  r.set("params.q", params.q);
  r.set("params.p", params.p);
  r.set("params.tree", params.tree_desc);
  r.set("trials", trials);
  r.set("entropy.seed", entropy.seed_hex());

  const PrfInstance inst = sample_instance(params, entropy);
  r.set("instance.digest", inst.digest());
  const std::size_t half = inst.half_len();

  struct Trial {
    std::uint64_t defect = 0;
    bool same_selector = false;
    bool oracle_agree = false;
  };
  std::vector<Trial> out(trials);

  run_trials(trials, parallel, [&](std::uint64_t i) {
    EntropySource es = entropy.fork(i);
    const Seed s1 = keygen(params, es);
    const Seed s2 = keygen(params, es);
    const std::string lh = es.bits(half);
    const std::string rh1 = es.bits(half);
    const std::string rh2 = es.bits(half);
    const std::string x = lh + rh1;
    const std::string y = lh + rh2;
    Trial& t = out[i];
    t.defect = homomorphism_defect(inst, s1, s2, x, y);
    t.same_selector = rh1[0] == rh2[0];
    t.oracle_agree =
        ref::homomorphism_defect(inst, s1, s2, x, y) == t.defect;
  });

  std::map<std::uint64_t, std::uint64_t> hist;
  std::uint64_t le1 = 0;
  std::uint64_t worst = 0;
  std::uint64_t agreements = 0;
  struct Stratum {
    std::uint64_t count = 0;
    std::uint64_t le1 = 0;
    std::uint64_t worst = 0;
  } same, diff;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Trial& t = out[i];
    r.set(trial_key("trial.", i, ".defect"), t.defect);
    r.set(trial_key("trial.", i, ".selector"),
          t.same_selector ? "same" : "diff");
    r.set(trial_key("trial.", i, ".oracle_agree"),
          static_cast<std::uint64_t>(t.oracle_agree ? 1 : 0));
    ++hist[t.defect];
    if (t.defect <= 1) ++le1;
    if (t.defect > worst) worst = t.defect;
    if (t.oracle_agree) ++agreements;
    Stratum& s = t.same_selector ? same : diff;
    ++s.count;
    if (t.defect <= 1) ++s.le1;
    if (t.defect > s.worst) s.worst = t.defect;
  }
  for (const auto& [value, count] : hist) {
    r.set("defect.hist." + pad_u64(value, 6), count);
  }
  r.set("defect.max", worst);
  if (trials > 0) {
    r.set("defect.fraction_le_1",
          static_cast<double>(le1) / static_cast<double>(trials));
  }
  auto stratum = [&r](const char* name, const Stratum& s) {
    const std::string base = std::string("defect.") + name;
    r.set(base + ".count", s.count);
    r.set(base + ".max", s.worst);
    if (s.count > 0) {
      r.set(base + ".fraction_le_1",
            static_cast<double>(s.le1) / static_cast<double>(s.count));
    }
  };
  stratum("same_selector", same);
  stratum("diff_selector", diff);
  r.set("oracle.agreements", agreements);
  r.set("oracle.all_agree",
        static_cast<std::uint64_t>(agreements == trials ? 1 : 0));
  return r;
}

// ---------------------------------------------------------------------------
// Epoch-rotation consistency
// ---------------------------------------------------------------------------

Report update_consistency_report(const PrfInstance& inst,
                                 std::uint64_t trials, EntropySource& entropy,
                                 bool parallel) {
  const Params& params = inst.params();
  if (params.p < 8) {
    throw PreconditionError(
        "update consistency report: robust probe needs p >= 8");
  }
  Report r;
  r.set("harness", "update-consistency");
  r.set("params.n", static_cast<std::uint64_t>(params.n));
  r.set("params.q", params.q);
  r.set("params.p", params.p);
  r.set("params.tree", params.tree_desc);
  r.set("trials", trials);
  r.set("entropy.seed", entropy.seed_hex());
  r.set("instance.digest", inst.digest());

  const std::size_t half = inst.half_len();
  const std::uint64_t nd = params.nd();

  struct Trial {
    std::uint64_t chain_len = 0;
    std::uint64_t defect = 0;
    bool decode_ok = false;
    bool decode_exact = false;
    bool oracle_agree = false;
  };
  std::vector<Trial> out(trials);

  run_trials(trials, parallel, [&](std::uint64_t i) {
    EntropySource es = entropy.fork(i);
    EpochKey ki = ue_setup(inst, es);
    ModMatrix data(nd, nd, 2);
    for (std::uint64_t a = 0; a < nd; ++a) {
      for (std::uint64_t b = 0; b < nd; ++b) {
        data.set(a, b, es.uniform(2));
      }
    }
    const Message msg = Message::robust(2, data);
    const std::string id = es.bits(half);
    Ciphertext c = ue_enc(inst, ki, msg, id);

    Trial& t = out[i];
    t.chain_len = 1 + (i % 8);
    t.oracle_agree = true;
    for (std::uint64_t step = 0; step < t.chain_len; ++step) {
      auto [next, tok] = ue_next(inst, ki, es);
      const Ciphertext updated = ue_upd(inst, tok, c);
      t.oracle_agree = t.oracle_agree && ref::ue_upd(inst, tok, c) == updated;
      c = updated;
      ki = next;
    }
    const Ciphertext fresh = ue_enc(inst, ki, msg, id);
    t.defect = centered_inf_norm(mat_sub(c.body, fresh.body));
    try {
      const Message back = ue_dec(inst, ki, c);
      t.decode_ok = true;
      t.decode_exact = back.data == msg.data;
    } catch (const InvariantError&) {
      t.decode_ok = false;
      t.decode_exact = false;
    }
  });

  std::map<std::uint64_t, std::uint64_t> worst_by_chain;
  std::uint64_t decode_failures = 0;
  std::uint64_t agreements = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Trial& t = out[i];
    r.set(trial_key("trial.", i, ".chain_len"), t.chain_len);
    r.set(trial_key("trial.", i, ".defect"), t.defect);
    r.set(trial_key("trial.", i, ".decode_ok"),
          static_cast<std::uint64_t>(t.decode_ok ? 1 : 0));
    r.set(trial_key("trial.", i, ".decode_exact"),
          static_cast<std::uint64_t>(t.decode_exact ? 1 : 0));
    r.set(trial_key("trial.", i, ".oracle_agree"),
          static_cast<std::uint64_t>(t.oracle_agree ? 1 : 0));
    auto [it, inserted] = worst_by_chain.try_emplace(t.chain_len, t.defect);
    if (!inserted && t.defect > it->second) {
      it->second = t.defect;
    }
    if (!t.decode_exact) ++decode_failures;
    if (t.oracle_agree) ++agreements;
  }
  for (const auto& [len, worst] : worst_by_chain) {
    r.set("defect.chain_len." + std::to_string(len) + ".max", worst);
  }
  r.set("decode.failures", decode_failures);
  r.set("oracle.agreements", agreements);
  r.set("oracle.all_agree",
        static_cast<std::uint64_t>(agreements == trials ? 1 : 0));

  // Degenerate transition: resampling "the same" key material, so
  // dk = 0 and the nonce is unchanged. The masked delta is still a
  // full function image, so the measured gap pins the zero-seed term.
  {
    EntropySource es = entropy.fork(trials);
    const EpochKey ki = ue_setup(inst, es);
    ModMatrix data(nd, nd, 2);
    for (std::uint64_t a = 0; a < nd; ++a) {
      for (std::uint64_t b = 0; b < nd; ++b) {
        data.set(a, b, es.uniform(2));
      }
    }
    const Message msg = Message::robust(2, data);
    const std::string id = es.bits(half);
    const Ciphertext c = ue_enc(inst, ki, msg, id);

    UpdateToken tok;
    tok.epoch = ki.epoch + 1;
    tok.dk = Seed{ModMatrix(params.n, nd, params.q)};
    tok.dn = almost_xor(ki.nonce, ki.nonce);
    EpochKey same_key = ki;
    same_key.epoch = ki.epoch + 1;

    const Ciphertext updated = ue_upd(inst, tok, c);
    const bool agree = ref::ue_upd(inst, tok, c) == updated;
    const Ciphertext fresh = ue_enc(inst, same_key, msg, id);
    r.set("degenerate.defect",
          centered_inf_norm(mat_sub(updated.body, fresh.body)));
    r.set("degenerate.oracle_agree",
          static_cast<std::uint64_t>(agree ? 1 : 0));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Reversal experiment
// ---------------------------------------------------------------------------

Report unidirectionality_report(const PrfInstance& inst,
                                std::uint64_t trials, EntropySource& entropy,
                                bool parallel) {
  const Params& params = inst.params();
  Report r;
  r.set("harness", "unidirectionality");
  r.set("params.n", static_cast<std::uint64_t>(params.n));
  r.set("params.q", params.q);
  r.set("params.p", params.p);
  r.set("params.tree", params.tree_desc);
  r.set("trials", trials);
  r.set("entropy.seed", entropy.seed_hex());
  r.set("instance.digest", inst.digest());

  const std::size_t half = inst.half_len();
  const std::uint64_t nd = params.nd();

  struct Trial {
    bool eq_plus = false;
    bool eq_minus = false;
    std::uint64_t norm_plus = 0;
    std::uint64_t norm_minus = 0;
  };
  std::vector<Trial> out(trials);

  run_trials(trials, parallel, [&](std::uint64_t i) {
    EntropySource es = entropy.fork(i);
    const EpochKey ki = ue_setup(inst, es);
    ModMatrix data(nd, nd, params.p);
    for (std::uint64_t a = 0; a < nd; ++a) {
      for (std::uint64_t b = 0; b < nd; ++b) {
        data.set(a, b, es.uniform(params.p));
      }
    }
    const Message msg = Message::raw(data);
    const std::string id = es.bits(half);
    const Ciphertext truth = ue_enc(inst, ki, msg, id);

    auto [next, tok] = ue_next(inst, ki, es);
    // The adversary's view: the fresh epoch e+1 ciphertext — the
    // closed form the rotation is claimed to land on — plus the token.
    const Ciphertext fresh = ue_enc(inst, next, msg, id);
    const ModMatrix mask = prf_eval_prime(inst, tok.dk, id, tok.dn);
    const ModMatrix cand_plus = mat_add(fresh.body, mask);
    const ModMatrix cand_minus = mat_sub(fresh.body, mask);

    Trial& t = out[i];
    t.eq_plus = cand_plus == truth.body;
    t.eq_minus = cand_minus == truth.body;
    t.norm_plus = centered_inf_norm(mat_sub(cand_plus, truth.body));
    t.norm_minus = centered_inf_norm(mat_sub(cand_minus, truth.body));
  });

  std::uint64_t reversions = 0;
  std::uint64_t min_norm_minus = ~0ull;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Trial& t = out[i];
    r.set(trial_key("trial.", i, ".eq_plus"),
          static_cast<std::uint64_t>(t.eq_plus ? 1 : 0));
    r.set(trial_key("trial.", i, ".eq_minus"),
          static_cast<std::uint64_t>(t.eq_minus ? 1 : 0));
    r.set(trial_key("trial.", i, ".norm_plus"), t.norm_plus);
    r.set(trial_key("trial.", i, ".norm_minus"), t.norm_minus);
    if (t.eq_plus || t.eq_minus) ++reversions;
    if (t.norm_minus < min_norm_minus) min_norm_minus = t.norm_minus;
  }
  r.set("reversions", reversions);
  if (trials > 0) {
    r.set("norm_minus.min", min_norm_minus);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Self-test
// ---------------------------------------------------------------------------

Report selftest_report(const Params& params, EntropySource& entropy,
                       bool* ok) {
  Report r;
  r.set("harness", "selftest");
  r.set("params.n", static_cast<std::uint64_t>(params.n));
  r.set("params.q", params.q);
  r.set("params.p", params.p);
  r.set("params.tree", params.tree_desc);
  r.set("entropy.seed", entropy.seed_hex());
  *ok = true;

  auto check = [&r, ok](std::string_view name, auto&& fn) {
    bool pass = false;
    std::string note;
    try {
      pass = fn();
    } catch (const std::exception& e) {
      note = e.what();
      pass = false;
    }
    r.set("check." + std::string(name), pass ? "pass" : "fail");
    if (!pass) {
      *ok = false;
      if (!note.empty()) {
        r.set("check." + std::string(name) + ".error", note);
      }
    }
  };

  const std::uint64_t nd = params.nd();

  check("modmath.add_neg", [&] {
    EntropySource es = entropy.fork(1000);
    const ModMatrix a = sample_uniform_matrix(3, 5, params.q, es);
    const ModMatrix b = sample_uniform_matrix(3, 5, params.q, es);
    return mat_add(a, mat_neg(a)) == ModMatrix(3, 5, params.q) &&
           mat_sub(mat_add(a, b), b) == a;
  });

  check("modmath.matmul_oracle", [&] {
    EntropySource es = entropy.fork(1001);
    for (std::uint64_t m : {params.q, std::uint64_t{1000003}}) {
      const ModMatrix a = sample_uniform_matrix(4, 6, m, es);
      const ModMatrix b = sample_uniform_matrix(6, 3, m, es);
      if (mat_mul(a, b) != ref::mat_mul(a, b)) {
        return false;
      }
    }
    return true;
  });

  check("modmath.rounding", [&] {
    EntropySource es = entropy.fork(1002);
    for (int i = 0; i < 512; ++i) {
      const std::uint64_t x = es.uniform(params.q);
      const std::uint64_t v = round_to_p(x, params.q, params.p);
      if (v != ref::round_to_p(x, params.q, params.p)) {
        return false;
      }
      // |q*v - p*x| <= q/2 up to wrap-around mod p*q.
      const unsigned __int128 pq =
          static_cast<unsigned __int128>(params.p) * params.q;
      const unsigned __int128 qv =
          static_cast<unsigned __int128>(params.q) * v % pq;
      const unsigned __int128 px =
          static_cast<unsigned __int128>(params.p) * x % pq;
      const unsigned __int128 dd = qv >= px ? qv - px : px - qv;
      const unsigned __int128 dist = dd <= pq - dd ? dd : pq - dd;
      if (2 * dist > params.q) {
        return false;
      }
    }
    return true;
  });

  check("gadget.reconstruction", [&] {
    EntropySource es = entropy.fork(1003);
    const GadgetContext ctx(params);
    const ModMatrix a =
        sample_uniform_matrix(params.n, nd, params.q, es);
    return mat_mul(ctx.G(), mat_decompose(a, ctx)) == a;
  });

  check("gadget.value_linearity", [&] {
    EntropySource es = entropy.fork(1004);
    const GadgetContext ctx(params);
    for (int i = 0; i < 64; ++i) {
      const std::uint64_t a = es.uniform(params.q);
      const std::uint64_t b = es.uniform(params.q);
      const auto da = bit_decompose(a, ctx);
      const auto db = bit_decompose(b, ctx);
      std::vector<std::uint64_t> sum(da.size());
      for (std::size_t k = 0; k < da.size(); ++k) {
        sum[k] = da[k] + db[k];
      }
      const unsigned __int128 inner = gadget_inner_unreduced(ctx, sum);
      if (inner >= (static_cast<unsigned __int128>(1) << (params.l + 1)) ||
          static_cast<std::uint64_t>(inner % params.q) !=
              add_mod(a, b, params.q)) {
        return false;
      }
    }
    return true;
  });

  check("tree.roundtrip", [&] {
    const FullBinaryTree t = FullBinaryTree::parse(params.tree_desc);
    const FullBinaryTree back = FullBinaryTree::parse(t.literal());
    return back.node_count() == t.node_count() &&
           back.leaf_count() == t.leaf_count() &&
           expansion(back) == expansion(t) &&
           sequentiality(back) == sequentiality(t);
  });

  EntropySource inst_es = entropy.fork(2000);
  const PrfInstance inst = sample_instance(params, inst_es);
  const Seed seed = keygen(params, inst_es);
  const std::size_t half = inst.half_len();

  check("prf.cache_coherence", [&] {
    EntropySource es = entropy.fork(1005);
    EvalCache cache;
    for (int i = 0; i < 8; ++i) {
      const std::string input = es.bits(2 * half);
      if (prf_eval(inst, seed, input, &cache) !=
          prf_eval(inst, seed, input)) {
        return false;
      }
    }
    return true;
  });

  check("prf.incremental", [&] {
    EntropySource es = entropy.fork(1006);
    EvalCache cache;
    std::string input = es.bits(2 * half);
    prf_eval(inst, seed, input, &cache);
    const std::size_t flip =
        static_cast<std::size_t>(es.uniform(2 * half));
    std::string flipped = input;
    flipped[flip] = flipped[flip] == '0' ? '1' : '0';
    const ModMatrix inc = eval_incremental(inst, seed, flipped, flip, cache);
    return inc == prf_eval(inst, seed, flipped);
  });

  check("prf.seed_zero", [&] {
    EntropySource es = entropy.fork(1007);
    const Seed zero{ModMatrix(params.n, nd, params.q)};
    const std::string bits = es.bits(half);
    return eval_b(inst, zero, bits) == eval_a(inst, bits);
  });

  check("prf.defect_oracle", [&] {
    EntropySource es = entropy.fork(1008);
    for (int i = 0; i < 3; ++i) {
      const Seed s1 = keygen(params, es);
      const Seed s2 = keygen(params, es);
      const std::string lh = es.bits(half);
      const std::string x = lh + es.bits(half);
      const std::string y = lh + es.bits(half);
      if (homomorphism_defect(inst, s1, s2, x, y) !=
          ref::homomorphism_defect(inst, s1, s2, x, y)) {
        return false;
      }
    }
    return true;
  });

  check("cprf.instance_binding", [&] {
    EntropySource es = entropy.fork(1009);
    const Seed k0 = keygen(params, es);
    const Seed k1 = keygen(params, es);
    ConstrainedKey ck = constrain(inst, k0, es.bits(half),
                                  ConstrainSide::kLeft, ConstrainMode::kOnes);
    ck.instance[0] = ck.instance[0] == '0' ? '1' : '0';
    try {
      eval_constrained(inst, ck, k1, es.bits(half));
      return false;
    } catch (const PreconditionError&) {
      return true;
    }
  });

  check("ue.roundtrip_raw", [&] {
    EntropySource es = entropy.fork(1010);
    const EpochKey ki = ue_setup(inst, es);
    ModMatrix data(nd, nd, params.p);
    for (std::uint64_t a = 0; a < nd; ++a) {
      for (std::uint64_t b = 0; b < nd; ++b) {
        data.set(a, b, es.uniform(params.p));
      }
    }
    const Message msg = Message::raw(data);
    const Ciphertext c = ue_enc(inst, ki, msg, es.bits(half));
    return ue_dec(inst, ki, c).data == msg.data;
  });

  check("ue.keychain", [&] {
    EntropySource es = entropy.fork(1011);
    const EpochKey ki = ue_setup(inst, es);
    auto [next, tok] = ue_next(inst, ki, es);
    return seed_add(next.k, tok.dk) == ki.k && next.epoch == ki.epoch + 1 &&
           tok.epoch == ki.epoch + 1;
  });

  check("ue.upd_oracle", [&] {
    EntropySource es = entropy.fork(1012);
    EpochKey ki = ue_setup(inst, es);
    ModMatrix data(nd, nd, params.p);
    const Ciphertext c = ue_enc(inst, ki, Message::raw(data), es.bits(half));
    auto [next, tok] = ue_next(inst, ki, es);
    return ue_upd(inst, tok, c) == ref::ue_upd(inst, tok, c);
  });

  check("serialize.roundtrip", [&] {
    std::ostringstream os;
    write_instance(os, inst);
    write_seed(os, params, seed);
    std::istringstream is(os.str());
    const PrfInstance inst2 = read_instance(is);
    const auto [params2, seed2] = read_seed(is);
    return inst2.digest() == inst.digest() && params2 == params &&
           seed2 == seed;
  });

  r.set("ok", static_cast<std::uint64_t>(*ok ? 1 : 0));
  return r;
}

// ---------------------------------------------------------------------------
// Benchmarks
// ---------------------------------------------------------------------------

Report bench_report(std::uint32_t n, std::uint64_t q, std::uint64_t p,
                    const std::vector<std::size_t>& sizes,
                    std::uint64_t trials, EntropySource& entropy) {
  if (trials == 0) {
    throw PreconditionError("bench: need at least one trial");
  }
  Report r;
  r.set("harness", "bench");
  r.set("params.n", static_cast<std::uint64_t>(n));
  r.set("params.q", q);
  r.set("params.p", p);
  r.set("trials", trials);
  r.set("entropy.seed", entropy.seed_hex());

  double prev_mean = 0.0;
  std::size_t prev_size = 0;
  for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
    const std::size_t size = sizes[idx];
    const std::string tag = "T" + pad_u64(size, 5);
    const Params params =
        Params::make(n, q, p, "balanced:" + std::to_string(size),
                     std::vector<std::uint8_t>{'b', 'e', 'n', 'c', 'h'});
    EntropySource es = entropy.fork(3000 + idx);
    const PrfInstance inst = sample_instance(params, es);
    const Seed seed = keygen(params, es);

    std::vector<std::string> inputs(trials);
    for (auto& s : inputs) {
      s = es.bits(2 * size);
    }

    const double t0 = now_seconds();
    ModMatrix last;
    for (const std::string& in : inputs) {
      last = prf_eval(inst, seed, in);
    }
    const double t1 = now_seconds();
    const double mean = (t1 - t0) / static_cast<double>(trials);
    r.set("time.eval." + tag + ".seconds", mean);

    const double t2 = now_seconds();
    const ModMatrix check = ref::prf_eval(inst, seed, inputs.back());
    const double t3 = now_seconds();
    r.set("time.ref." + tag + ".seconds", t3 - t2);
    r.set("oracle.agree." + tag,
          static_cast<std::uint64_t>(check == last ? 1 : 0));

    // Incremental path: exact structural counts plus wall time.
    EvalCache cache;
    prf_eval(inst, seed, inputs[0], &cache);
    const std::size_t flip = static_cast<std::size_t>(es.uniform(2 * size));
    std::string flipped = inputs[0];
    flipped[flip] = flipped[flip] == '0' ? '1' : '0';
    const double t4 = now_seconds();
    const ModMatrix inc = eval_incremental(inst, seed, flipped, flip, cache);
    const double t5 = now_seconds();
    r.set("time.incremental." + tag + ".seconds", t5 - t4);
    const std::size_t leaf = flip % size;
    r.set("incremental." + tag + ".recomputed",
          static_cast<std::uint64_t>(cache.last_stats().recomputed_nodes));
    r.set("incremental." + tag + ".leaf_depth",
          static_cast<std::uint64_t>(inst.tree().leaf_depth(leaf)));
    r.set("incremental." + tag + ".matches_fresh",
          static_cast<std::uint64_t>(
              inc == prf_eval(inst, seed, flipped) ? 1 : 0));

    if (idx > 0 && prev_mean > 0.0) {
      r.set("time.ratio." + tag + "_over_T" + pad_u64(prev_size, 5),
            mean / prev_mean);
    }
    prev_mean = mean;
    prev_size = size;
  }
  return r;
}

}  // namespace kih

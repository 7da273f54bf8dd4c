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

#ifndef KIH_REPORTS_HPP_
#define KIH_REPORTS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kih/kihprf.hpp"
#include "kih/ue.hpp"
#include "kih/xof.hpp"

namespace kih {

// Structured plain-text report: "key: value" lines emitted in sorted
// key order, so identical runs diff as identical bytes. Values must not
// contain newlines. Wall-clock fields are the only keys allowed to vary
// between replays of the same seed; they are all namespaced under
// "time." so report diffs can exclude them mechanically.
class Report {
 public:
  void set(std::string_view key, std::string_view value);
  void set(std::string_view key, std::uint64_t value);
  void set(std::string_view key, double value);  // fixed 6-digit form

  const std::string& get(std::string_view key) const;
  bool has(std::string_view key) const;

  std::string text() const;

 private:
  std::map<std::string, std::string> entries_;
};

// Zero-padded decimal for stable lexicographic ordering of trial keys.
std::string trial_key(std::string_view prefix, std::uint64_t index,
                      std::string_view suffix);

// Combination-gap distribution for inputs sharing a left half. Per
// trial: fresh seeds s1, s2, a shared left half, independent right
// halves; the gap is measured by the library and re-measured by the
// serial reference; the report records the histogram, fraction <= 1,
// and a stratification by whether the two right halves start with the
// same bit (the selector the leading tree node consumes). Deterministic
// given the entropy seed; trials fork by index so any schedule emits
// identical bytes.
Report defect_report(const Params& params, std::uint64_t trials,
                     EntropySource& entropy, bool parallel = true);

// Epoch-rotation consistency. Each trial encrypts a robust-mode
// message, walks a chain of 1..8 rotations applying host updates, and
// measures the gap between the updated body and a fresh encryption
// under the final epoch key, plus whether robust decoding still
// recovers the message. Includes the degenerate transition with
// dk = 0 and an unchanged nonce.
Report update_consistency_report(const PrfInstance& inst,
                                 std::uint64_t trials,
                                 EntropySource& entropy,
                                 bool parallel = true);

// Reversal experiment. Per trial the adversary holds the fresh epoch
// e+1 ciphertext of (id, m) — exactly the closed form the rotation is
// claimed to produce — and the update token, and forms the two
// candidates body +/- prf_eval_prime(dk, id, dn). Records bit-exact
// equality against the true epoch-e ciphertext; the experiment demands
// zero equalities. (Candidates built from the literally-updated body
// would re-add the very matrix upd subtracted — a mechanical inverse,
// not a reversal attack — so the fresh form is the meaningful target.)
Report unidirectionality_report(const PrfInstance& inst,
                                std::uint64_t trials, EntropySource& entropy,
                                bool parallel = true);

// Runs every module invariant at the given parameters; returns the
// report and sets ok=false on the first violation.
Report selftest_report(const Params& params, EntropySource& entropy,
                       bool* ok);

// Wall time per evaluation for |T| in sizes at fixed (n, q, p), the
// serial-reference comparison, and the incremental-recompute counts
// (exact, from cache instrumentation). Timing keys live under "time.".
Report bench_report(std::uint32_t n, std::uint64_t q, std::uint64_t p,
                    const std::vector<std::size_t>& sizes,
                    std::uint64_t trials, EntropySource& entropy);

}  // namespace kih

#endif  // KIH_REPORTS_HPP_

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

#include <sstream>
#include <string>

#include "doctest.h"
#include "kih/errors.hpp"
#include "kih/presets.hpp"
#include "kih/reports.hpp"

using namespace kih;

namespace {

// Report text with "time." lines removed: the only keys allowed to
// differ between replays of the same entropy seed.
std::string stable_lines(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("time.", 0) != 0) {
      out += line;
      out += '\n';
    }
  }
  return out;
}

PrfInstance instance_for(const char* preset, const char* hex) {
  EntropySource e = EntropySource::from_hex(hex);
  return sample_instance(preset_by_name(preset).params, e);
}

}  // namespace

TEST_CASE("report container: sorted text, strict keys") {
  Report r;
  r.set("zeta", std::uint64_t{3});
  r.set("alpha", "first");
  r.set("mid.ratio", 0.5);
  CHECK(r.text() == "alpha: first\nmid.ratio: 0.500000\nzeta: 3\n");
  CHECK(r.get("alpha") == "first");
  CHECK(r.has("zeta"));
  CHECK_FALSE(r.has("missing"));
  CHECK_THROWS_AS((void)r.get("missing"), PreconditionError);
  CHECK_THROWS_AS(r.set("bad", "a\nb"), InvariantError);
  CHECK_THROWS_AS(r.set("", "x"), InvariantError);
  // Re-setting a key overwrites.
  r.set("alpha", "second");
  CHECK(r.get("alpha") == "second");
  CHECK(trial_key("trial.", 7, ".defect") == "trial.000007.defect");
  CHECK(trial_key("trial.", 123456, ".x") == "trial.123456.x");
}

TEST_CASE("defect report: deterministic, schedule-independent, oracle-checked") {
  const Params params = preset_by_name("TOY").params;
  EntropySource e1 = EntropySource::from_hex("0123");
  const Report par = defect_report(params, 24, e1, /*parallel=*/true);
  EntropySource e2 = EntropySource::from_hex("0123");
  const Report ser = defect_report(params, 24, e2, /*parallel=*/false);
  CHECK(par.text() == ser.text());

  CHECK(par.get("harness") == "defect");
  CHECK(par.get("trials") == "24");
  CHECK(par.get("oracle.all_agree") == "1");
  CHECK(par.get("oracle.agreements") == "24");
  CHECK(par.has("defect.max"));
  CHECK(par.has("defect.fraction_le_1"));
  CHECK(par.has("trial.000000.defect"));
  CHECK(par.has("trial.000023.selector"));
  CHECK_FALSE(par.has("trial.000024.defect"));
  // Strata partition the trials.
  const std::uint64_t same = std::stoull(par.get("defect.same_selector.count"));
  const std::uint64_t diff = std::stoull(par.get("defect.diff_selector.count"));
  CHECK(same + diff == 24);
  // A different entropy seed changes the trial material.
  EntropySource e3 = EntropySource::from_hex("4567");
  CHECK_FALSE(defect_report(params, 24, e3).text() == par.text());
}

TEST_CASE("update consistency report") {
  // The robust probe needs 2 <= t <= p/4; p = 4 admits no such t.
  const PrfInstance toy = instance_for("TOY", "aa");
  EntropySource et = EntropySource::from_hex("bb");
  CHECK_THROWS_AS((void)update_consistency_report(toy, 4, et),
                  PreconditionError);

  const PrfInstance desk = instance_for("DESK", "cc");
  EntropySource e1 = EntropySource::from_hex("dd");
  const Report par = update_consistency_report(desk, 6, e1, true);
  EntropySource e2 = EntropySource::from_hex("dd");
  const Report ser = update_consistency_report(desk, 6, e2, false);
  CHECK(par.text() == ser.text());
  CHECK(par.get("harness") == "update-consistency");
  CHECK(par.get("oracle.all_agree") == "1");
  CHECK(par.get("degenerate.oracle_agree") == "1");
  CHECK(par.has("degenerate.defect"));
  CHECK(par.has("decode.failures"));
  CHECK(par.has("trial.000005.chain_len"));
  // Every trial carries both library and reference measurements.
  for (int i = 0; i < 6; ++i) {
    CHECK(par.get(trial_key("trial.", i, ".oracle_agree")) == "1");
  }
}

TEST_CASE("unidirectionality report") {
  const PrfInstance desk = instance_for("DESK", "ee");
  EntropySource e1 = EntropySource::from_hex("ff");
  const Report par = unidirectionality_report(desk, 8, e1, true);
  EntropySource e2 = EntropySource::from_hex("ff");
  const Report ser = unidirectionality_report(desk, 8, e2, false);
  CHECK(par.text() == ser.text());
  CHECK(par.get("harness") == "unidirectionality");
  CHECK(par.get("reversions") == "0");
  for (int i = 0; i < 8; ++i) {
    CHECK(par.get(trial_key("trial.", i, ".eq_plus")) == "0");
    CHECK(par.get(trial_key("trial.", i, ".eq_minus")) == "0");
    CHECK(par.get(trial_key("trial.", i, ".norm_plus")) != "0");
  }
  CHECK(par.has("norm_minus.min"));
}

TEST_CASE("selftest report") {
  const Params params = preset_by_name("TOY").params;
  EntropySource e = EntropySource::from_hex("1a2b");
  bool ok = false;
  const Report r = selftest_report(params, e, &ok);
  CHECK(ok);
  CHECK(r.get("ok") == "1");
  CHECK(r.get("harness") == "selftest");
  // Every check line reads "pass".
  std::istringstream in(r.text());
  std::string line;
  std::size_t checks = 0;
  while (std::getline(in, line)) {
    if (line.rfind("check.", 0) == 0) {
      ++checks;
      CHECK(line.substr(line.find(": ") + 2) == "pass");
    }
  }
  CHECK(checks >= 10);
}

TEST_CASE("bench report") {
  EntropySource bad = EntropySource::from_hex("00");
  CHECK_THROWS_AS((void)bench_report(1, 16, 4, {2}, 0, bad),
                  PreconditionError);

  EntropySource e1 = EntropySource::from_hex("b1b2");
  const Report r = bench_report(1, 16, 4, {2, 4}, 2, e1);
  CHECK(r.get("harness") == "bench");
  for (const char* tag : {"T00002", "T00004"}) {
    CHECK(r.get(std::string("oracle.agree.") + tag) == "1");
    CHECK(r.get(std::string("incremental.") + tag + ".matches_fresh") == "1");
    CHECK(r.get(std::string("incremental.") + tag + ".recomputed") ==
          r.get(std::string("incremental.") + tag + ".leaf_depth"));
    CHECK(r.has(std::string("time.eval.") + tag + ".seconds"));
    CHECK(r.has(std::string("time.ref.") + tag + ".seconds"));
    CHECK(r.has(std::string("time.incremental.") + tag + ".seconds"));
  }
  CHECK(r.has("time.ratio.T00004_over_T00002"));
  // Replays agree on everything except wall-clock keys.
  EntropySource e2 = EntropySource::from_hex("b1b2");
  const Report again = bench_report(1, 16, 4, {2, 4}, 2, e2);
  CHECK(stable_lines(again.text()) == stable_lines(r.text()));
}

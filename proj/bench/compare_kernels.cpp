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

// Times the OpenMP matrix kernels against the straight-line serial
// reference on the same inputs and checks that both produce identical
// entries. Usage: compare_kernels [dim] [reps]

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "kih/kihprf.hpp"
#include "kih/modmath.hpp"
#include "kih/reference.hpp"
#include "kih/xof.hpp"

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_reps(int reps, F&& body) {
  const double t0 = now_seconds();
  for (int i = 0; i < reps; ++i) {
    body();
  }
  return (now_seconds() - t0) / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t dim = argc > 1 ? std::stoul(argv[1]) : 256;
  const int reps = argc > 2 ? std::stoi(argv[2]) : 5;
  kih::EntropySource entropy =
      kih::EntropySource::from_hex("00112233445566778899aabbccddeeff");

  const std::uint64_t moduli[] = {1ull << 16, (1ull << 32) + 15,
                                  (1ull << 61) - 1};
  std::printf("%-22s %12s %12s %8s %6s\n", "kernel", "parallel(s)",
              "serial(s)", "speedup", "match");
  for (const std::uint64_t q : moduli) {
    kih::ModMatrix a = kih::sample_uniform_matrix(dim, dim, q, entropy);
    kih::ModMatrix b = kih::sample_uniform_matrix(dim, dim, q, entropy);
    kih::ModMatrix out_par = kih::mat_mul(a, b);
    kih::ModMatrix out_ser = kih::ref::mat_mul(a, b);
    const double tp = time_reps(reps, [&] { out_par = kih::mat_mul(a, b); });
    const double ts =
        time_reps(reps, [&] { out_ser = kih::ref::mat_mul(a, b); });
    std::printf("mat_mul q=2^%-13.0f %12.6f %12.6f %8.2fx %6s\n",
                std::log2(static_cast<double>(q)), tp, ts, ts / tp,
                out_par == out_ser ? "yes" : "NO");
    if (!(out_par == out_ser)) {
      return 1;
    }
  }

  // End-to-end evaluation: library evaluator vs serial reference.
  const kih::Params params = kih::Params::make(
      8, 1ull << 32, 1ull << 16, "balanced:16", {'b', 'e', 'n', 'c', 'h'});
  const kih::PrfInstance inst = kih::sample_instance(params, entropy);
  const kih::Seed seed = kih::keygen(params, entropy);
  const std::string input = entropy.bits(2 * inst.tree().leaf_count());
  kih::ModMatrix lib = kih::prf_eval(inst, seed, input);
  kih::ModMatrix ser = kih::ref::prf_eval(inst, seed, input);
  const double tp =
      time_reps(reps, [&] { lib = kih::prf_eval(inst, seed, input); });
  const double ts =
      time_reps(reps, [&] { ser = kih::ref::prf_eval(inst, seed, input); });
  std::printf("%-22s %12.6f %12.6f %8.2fx %6s\n", "prf_eval |T|=16", tp, ts,
              ts / tp, lib == ser ? "yes" : "NO");
  return lib == ser ? 0 : 1;
}

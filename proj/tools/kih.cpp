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

// Command-line front end. Exit codes: 0 success, 2 usage, 3 data
// format, 4 invariant violation, 5 precondition violation. Every
// subcommand is replayable: the same flags, entropy seed, and input
// files produce byte-identical output.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "kih/cprf.hpp"
#include "kih/errors.hpp"
#include "kih/kihprf.hpp"
#include "kih/presets.hpp"
#include "kih/reports.hpp"
#include "kih/serialize.hpp"
#include "kih/ue.hpp"

namespace {

using namespace kih;

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const Preset& p : presets()) {
    names.push_back(p.name);
  }
  return names;
}

// Flag > KIH_PRESET environment variable > DESK. A flag value is
// validated at parse time; a malformed environment value surfaces as a
// data-format error rather than being silently replaced.
std::string effective_preset(const std::string& flag_value) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  const char* env = std::getenv("KIH_PRESET");
  if (env != nullptr && env[0] != '\0') {
    return env;
  }
  return "DESK";
}

Params resolve_params(const std::string& preset, const std::string& tree) {
  Params params = preset_by_name(effective_preset(preset)).params;
  if (!tree.empty()) {
    params = Params::make(params.n, params.q, params.p, tree,
                          params.prg_salt);
  }
  return params;
}

EntropySource make_entropy(const std::string& hex) {
  if (hex.empty()) {
    return EntropySource::system();
  }
  return EntropySource::from_hex(hex);
}

void apply_threads(std::uint64_t threads) {
#ifdef _OPENMP
  if (threads > 0) {
    omp_set_num_threads(static_cast<int>(threads));
  }
#else
  (void)threads;
#endif
}

std::string serialize_to_string(const auto& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

PrfInstance load_instance(const std::string& path) {
  std::istringstream is(load_file(path));
  return read_instance(is);
}

Seed load_seed_for(const PrfInstance& inst, const std::string& path) {
  std::istringstream is(load_file(path));
  auto [params, seed] = read_seed(is);
  if (params != inst.params()) {
    throw PreconditionError("seed file was made for different parameters");
  }
  return seed;
}

EpochKey load_epoch_key_for(const PrfInstance& inst,
                            const std::string& path) {
  std::istringstream is(load_file(path));
  auto [params, ki] = read_epoch_key(is);
  if (params != inst.params()) {
    throw PreconditionError(
        "epoch key file was made for different parameters");
  }
  return ki;
}

UpdateToken load_token_for(const PrfInstance& inst,
                           const std::string& path) {
  std::istringstream is(load_file(path));
  auto [params, tok] = read_update_token(is);
  if (params != inst.params()) {
    throw PreconditionError("token file was made for different parameters");
  }
  return tok;
}

Ciphertext load_ciphertext(const std::string& path) {
  std::istringstream is(load_file(path));
  return read_ciphertext(is);
}

ModMatrix load_matrix(const std::string& path) {
  std::istringstream is(load_file(path));
  return read_matrix(is);
}

void print_matrix(const ModMatrix& m) {
  std::cout << "matrix.rows: " << m.rows() << '\n';
  std::cout << "matrix.cols: " << m.cols() << '\n';
  std::cout << "matrix.modulus: " << m.modulus() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::printf("row.%06zu:", i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::printf(" %llu", static_cast<unsigned long long>(m.at(i, j)));
    }
    std::printf("\n");
  }
}

void store_matrix(const std::string& path, const ModMatrix& m) {
  save_file(path, serialize_to_string(
                      [&](std::ostream& os) { write_matrix(os, m); }));
}

ModMatrix random_message_matrix(const Params& params, std::uint64_t modulus,
                                EntropySource& entropy) {
  return sample_uniform_matrix(params.nd(), params.nd(), modulus, entropy);
}

// Shared flag bundle; each subcommand reads the fields it declared.
struct Config {
  std::string preset;  // empty = KIH_PRESET env var, then DESK
  std::string tree;
  std::string entropy;
  std::uint64_t threads = 0;
  std::uint64_t trials = 50;

  std::string instance_path;
  std::string seed_path;
  std::string out_path;
  std::string input;
  std::string z0;
  std::string z1;

  std::string side = "left";
  std::string mode = "ones";
  std::string x0;
  std::string x1;
  std::string key_path;

  std::string store = ".";
  std::string data_id;
  std::string message_path;
  std::string token_path;
  std::string ct_path;
  std::uint64_t robust_t = 0;

  std::uint32_t bench_n = 4;
  std::uint64_t bench_q = 1ull << 16;
  std::uint64_t bench_p = 1ull << 8;
  std::vector<std::size_t> sizes = {2, 4, 8, 16};
};

namespace fs = std::filesystem;

std::string store_path(const Config& cfg, const std::string& explicit_path,
                       const char* name) {
  if (!explicit_path.empty()) {
    return explicit_path;
  }
  return (fs::path(cfg.store) / name).string();
}

void cmd_instance(const Config& cfg) {
  const Params params = resolve_params(cfg.preset, cfg.tree);
  EntropySource entropy = make_entropy(cfg.entropy);
  const PrfInstance inst = sample_instance(params, entropy);
  const std::string path =
      cfg.out_path.empty() ? "instance.kih" : cfg.out_path;
  save_file(path, serialize_to_string([&](std::ostream& os) {
              write_instance(os, inst);
            }));
  std::cout << "instance.digest: " << inst.digest() << '\n';
  std::cout << "instance.path: " << path << '\n';
}

void cmd_keygen(const Config& cfg) {
  const Params params = resolve_params(cfg.preset, cfg.tree);
  EntropySource entropy = make_entropy(cfg.entropy);
  const Seed seed = keygen(params, entropy);
  const std::string path = cfg.out_path.empty() ? "seed.kih" : cfg.out_path;
  save_file(path, serialize_to_string([&](std::ostream& os) {
              write_seed(os, params, seed);
            }));
  std::cout << "seed.path: " << path << '\n';
}

void cmd_eval(const Config& cfg) {
  const PrfInstance inst = load_instance(cfg.instance_path);
  const Seed seed = load_seed_for(inst, cfg.seed_path);
  const ModMatrix out = prf_eval(inst, seed, cfg.input);
  print_matrix(out);
  if (!cfg.out_path.empty()) {
    store_matrix(cfg.out_path, out);
  }
}

void cmd_eval_prime(const Config& cfg) {
  const PrfInstance inst = load_instance(cfg.instance_path);
  const Seed seed = load_seed_for(inst, cfg.seed_path);
  const SymbolString z1 = SymbolString::parse(cfg.z1);
  const ModMatrix out = prf_eval_prime(inst, seed, cfg.z0, z1);
  print_matrix(out);
  if (!cfg.out_path.empty()) {
    store_matrix(cfg.out_path, out);
  }
}

void cmd_defect(const Config& cfg) {
  apply_threads(cfg.threads);
  const Params params = resolve_params(cfg.preset, cfg.tree);
  EntropySource entropy = make_entropy(cfg.entropy);
  const Report r =
      defect_report(params, cfg.trials, entropy, cfg.threads != 1);
  std::cout << r.text();
}

void cmd_cprf_constrain(const Config& cfg) {
  const PrfInstance inst = load_instance(cfg.instance_path);
  const Seed k0 = load_seed_for(inst, cfg.seed_path);
  const ConstrainedKey ck =
      constrain(inst, k0, cfg.x0, side_from_string(cfg.side),
                mode_from_string(cfg.mode));
  const std::string path = cfg.out_path.empty() ? "ck.kih" : cfg.out_path;
  save_file(path, serialize_to_string([&](std::ostream& os) {
              write_constrained_key(os, ck);
            }));
  std::cout << "key.side: " << to_string(ck.side) << '\n';
  std::cout << "key.mode: " << to_string(ck.mode) << '\n';
  std::cout << "key.path: " << path << '\n';
}

void cmd_cprf_eval(const Config& cfg) {
  const PrfInstance inst = load_instance(cfg.instance_path);
  const Seed k1 = load_seed_for(inst, cfg.seed_path);
  std::istringstream is(load_file(cfg.key_path));
  const ConstrainedKey ck = read_constrained_key(is);
  const ModMatrix out =
      ck.mode == ConstrainMode::kOnes
          ? eval_constrained(inst, ck, k1, cfg.x1)
          : eval_constrained_symbols(inst, ck, k1,
                                     SymbolString::parse(cfg.x1));
  print_matrix(out);
  if (!cfg.out_path.empty()) {
    store_matrix(cfg.out_path, out);
  }
}

void cmd_ue_setup(const Config& cfg) {
  const Params params = resolve_params(cfg.preset, cfg.tree);
  EntropySource entropy = make_entropy(cfg.entropy);
  const PrfInstance inst = sample_instance(params, entropy);
  const EpochKey ki = ue_setup(inst, entropy);
  fs::create_directories(cfg.store);
  const std::string inst_path = store_path(cfg, "", "instance.kih");
  const std::string key_path = store_path(cfg, cfg.key_path, "key.kih");
  save_file(inst_path, serialize_to_string([&](std::ostream& os) {
              write_instance(os, inst);
            }));
  save_file(key_path, serialize_to_string([&](std::ostream& os) {
              write_epoch_key(os, params, ki);
            }));
  std::cout << "instance.digest: " << inst.digest() << '\n';
  std::cout << "key.epoch: " << ki.epoch << '\n';
}

void cmd_ue_enc(const Config& cfg) {
  const PrfInstance inst =
      load_instance(store_path(cfg, cfg.instance_path, "instance.kih"));
  const EpochKey ki =
      load_epoch_key_for(inst, store_path(cfg, cfg.key_path, "key.kih"));
  Message msg = Message::raw(ModMatrix());
  if (!cfg.message_path.empty()) {
    const ModMatrix data = load_matrix(cfg.message_path);
    msg = cfg.robust_t >= 2 ? Message::robust(cfg.robust_t, data)
                            : Message::raw(data);
  } else {
    EntropySource entropy = make_entropy(cfg.entropy);
    if (cfg.robust_t >= 2) {
      msg = Message::robust(
          cfg.robust_t,
          random_message_matrix(inst.params(), cfg.robust_t, entropy));
    } else {
      msg = Message::raw(
          random_message_matrix(inst.params(), inst.params().p, entropy));
    }
  }
  const Ciphertext c = ue_enc(inst, ki, msg, cfg.data_id);
  const std::string path = store_path(
      cfg, cfg.out_path, ("ct-" + cfg.data_id + ".kih").c_str());
  save_file(path, serialize_to_string([&](std::ostream& os) {
              write_ciphertext(os, c);
            }));
  std::cout << "ciphertext.epoch: " << c.epoch << '\n';
  std::cout << "ciphertext.path: " << path << '\n';
}

void cmd_ue_dec(const Config& cfg) {
  const PrfInstance inst =
      load_instance(store_path(cfg, cfg.instance_path, "instance.kih"));
  const EpochKey ki =
      load_epoch_key_for(inst, store_path(cfg, cfg.key_path, "key.kih"));
  const Ciphertext c = load_ciphertext(cfg.ct_path);
  const Message msg = ue_dec(inst, ki, c);
  std::cout << "message.mode: "
            << (msg.mode == MsgMode::kRaw ? "raw" : "robust") << '\n';
  if (msg.mode == MsgMode::kRobust) {
    std::cout << "message.t: " << msg.t << '\n';
  }
  print_matrix(msg.data);
}

void cmd_ue_next(const Config& cfg) {
  const PrfInstance inst =
      load_instance(store_path(cfg, cfg.instance_path, "instance.kih"));
  const std::string key_path = store_path(cfg, cfg.key_path, "key.kih");
  const EpochKey ki = load_epoch_key_for(inst, key_path);
  EntropySource entropy = make_entropy(cfg.entropy);
  const auto [next, tok] = ue_next(inst, ki, entropy);
  const std::string token_path = store_path(
      cfg, cfg.token_path,
      ("token-e" + std::to_string(tok.epoch) + ".kih").c_str());
  // The owner's stored key is replaced: after rotation only the new
  // key and the outgoing token exist.
  save_file(key_path, serialize_to_string([&](std::ostream& os) {
              write_epoch_key(os, inst.params(), next);
            }));
  save_file(token_path, serialize_to_string([&](std::ostream& os) {
              write_update_token(os, inst.params(), tok);
            }));
  std::cout << "key.epoch: " << next.epoch << '\n';
  std::cout << "token.epoch: " << tok.epoch << '\n';
  std::cout << "token.path: " << token_path << '\n';
}

void cmd_ue_upd(const Config& cfg) {
  const PrfInstance inst =
      load_instance(store_path(cfg, cfg.instance_path, "instance.kih"));
  const UpdateToken tok = load_token_for(inst, cfg.token_path);
  const Ciphertext c = load_ciphertext(cfg.ct_path);
  const Ciphertext updated = ue_upd(inst, tok, c);
  const std::string path =
      cfg.out_path.empty() ? cfg.ct_path : cfg.out_path;
  save_file(path, serialize_to_string([&](std::ostream& os) {
              write_ciphertext(os, updated);
            }));
  std::cout << "ciphertext.epoch: " << updated.epoch << '\n';
  std::cout << "ciphertext.path: " << path << '\n';
}

void cmd_ue_demo(const Config& cfg) {
  apply_threads(cfg.threads);
  const Params params = resolve_params(cfg.preset, cfg.tree);
  EntropySource entropy = make_entropy(cfg.entropy);
  const PrfInstance inst = sample_instance(params, entropy);
  const bool parallel = cfg.threads != 1;
  const Report consistency =
      update_consistency_report(inst, cfg.trials, entropy, parallel);
  const Report oneway =
      unidirectionality_report(inst, cfg.trials, entropy, parallel);
  std::cout << consistency.text() << '\n' << oneway.text();
}

void cmd_bench(const Config& cfg) {
  if (cfg.sizes.empty()) {
    throw CLI::ValidationError("--sizes", "at least one size is required");
  }
  EntropySource entropy = make_entropy(cfg.entropy);
  const Report r = bench_report(cfg.bench_n, cfg.bench_q, cfg.bench_p,
                                cfg.sizes, cfg.trials, entropy);
  std::cout << r.text();
}

int g_selftest_status = 0;

void cmd_selftest(const Config& cfg) {
  const Params params = resolve_params(cfg.preset, cfg.tree);
  EntropySource entropy = make_entropy(cfg.entropy);
  bool ok = false;
  const Report r = selftest_report(params, entropy, &ok);
  std::cout << r.text();
  g_selftest_status = ok ? 0 : 4;
}

void add_params_flags(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--preset", cfg.preset,
                  "named parameter set (default: KIH_PRESET, then DESK)")
      ->check(CLI::IsMember(preset_names()));
  cmd->add_option("--tree", cfg.tree,
                  "input-shape descriptor overriding the preset's");
}

void add_entropy_flag(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--entropy", cfg.entropy,
                  "hex seed for deterministic randomness (default: OS RNG)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice PRF with additive key homomorphism, constrained "
               "keys, and key-rotating encryption"};
  app.require_subcommand(1);
  Config cfg;

  CLI::App* c_instance =
      app.add_subcommand("instance", "sample and store a public instance");
  add_params_flags(c_instance, cfg);
  add_entropy_flag(c_instance, cfg);
  c_instance->add_option("--out", cfg.out_path, "output file");
  c_instance->callback([&] { cmd_instance(cfg); });

  CLI::App* c_keygen =
      app.add_subcommand("keygen", "sample and store a secret seed");
  add_params_flags(c_keygen, cfg);
  add_entropy_flag(c_keygen, cfg);
  c_keygen->add_option("--out", cfg.out_path, "output file");
  c_keygen->callback([&] { cmd_keygen(cfg); });

  CLI::App* c_eval = app.add_subcommand("eval", "evaluate the base map");
  c_eval->add_option("--instance", cfg.instance_path)->required();
  c_eval->add_option("--seed", cfg.seed_path)->required();
  c_eval->add_option("--input", cfg.input, "bit string of length 2|T|")
      ->required();
  c_eval->add_option("--store", cfg.out_path, "also store the matrix here");
  c_eval->callback([&] { cmd_eval(cfg); });

  CLI::App* c_evalp =
      app.add_subcommand("eval-prime", "evaluate the mixed-alphabet map");
  c_evalp->add_option("--instance", cfg.instance_path)->required();
  c_evalp->add_option("--seed", cfg.seed_path)->required();
  c_evalp->add_option("--z0", cfg.z0, "bit string of length |T|")
      ->required();
  c_evalp->add_option("--z1", cfg.z1, "symbol string over 0/1/Z")
      ->required();
  c_evalp->add_option("--store", cfg.out_path, "also store the matrix here");
  c_evalp->callback([&] { cmd_eval_prime(cfg); });

  CLI::App* c_defect = app.add_subcommand(
      "defect", "combination-gap distribution report");
  add_params_flags(c_defect, cfg);
  add_entropy_flag(c_defect, cfg);
  c_defect->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  c_defect->add_option("--threads", cfg.threads,
                       "worker threads (1 = serial)");
  c_defect->callback([&] { cmd_defect(cfg); });

  CLI::App* c_cprf =
      app.add_subcommand("cprf", "constrained-key operations");
  c_cprf->require_subcommand(1);
  CLI::App* c_constrain =
      c_cprf->add_subcommand("constrain", "derive a constrained key");
  c_constrain->add_option("--instance", cfg.instance_path)->required();
  c_constrain->add_option("--seed", cfg.seed_path, "base seed k0 file")
      ->required();
  c_constrain->add_option("--x0", cfg.x0, "fixed half, |T| bits")
      ->required();
  c_constrain->add_option("--side", cfg.side)
      ->check(CLI::IsMember({"left", "right"}));
  c_constrain->add_option("--mode", cfg.mode)
      ->check(CLI::IsMember({"ones", "zeros"}));
  c_constrain->add_option("--out", cfg.out_path, "output file");
  c_constrain->callback([&] { cmd_cprf_constrain(cfg); });

  CLI::App* c_cprf_eval =
      c_cprf->add_subcommand("eval", "evaluate under a constrained key");
  c_cprf_eval->add_option("--instance", cfg.instance_path)->required();
  c_cprf_eval->add_option("--key", cfg.key_path, "constrained key file")
      ->required();
  c_cprf_eval->add_option("--seed", cfg.seed_path, "second seed k1 file")
      ->required();
  c_cprf_eval
      ->add_option("--x1", cfg.x1,
                   "free-half target: bits (ones mode) or symbols over "
                   "1/Z (zeros mode)")
      ->required();
  c_cprf_eval->add_option("--store", cfg.out_path,
                          "also store the matrix here");
  c_cprf_eval->callback([&] { cmd_cprf_eval(cfg); });

  CLI::App* c_ue =
      app.add_subcommand("ue", "updatable-encryption operations");
  c_ue->require_subcommand(1);
  auto add_store = [&](CLI::App* cmd) {
    cmd->add_option("--store", cfg.store,
                    "directory holding instance/key/ciphertext files");
  };

  CLI::App* c_setup = c_ue->add_subcommand(
      "setup", "sample an instance and the epoch 0 key");
  add_params_flags(c_setup, cfg);
  add_entropy_flag(c_setup, cfg);
  add_store(c_setup);
  c_setup->callback([&] { cmd_ue_setup(cfg); });

  CLI::App* c_enc = c_ue->add_subcommand("enc", "encrypt under the "
                                                "current epoch key");
  add_store(c_enc);
  add_entropy_flag(c_enc, cfg);
  c_enc->add_option("--instance", cfg.instance_path);
  c_enc->add_option("--key", cfg.key_path);
  c_enc->add_option("--data-id", cfg.data_id, "record id, |T| bits")
      ->required();
  c_enc->add_option("--message", cfg.message_path,
                    "matrix file; omitted = random message");
  c_enc->add_option("--robust-t", cfg.robust_t,
                    "embed entries mod t with error headroom (0 = raw)");
  c_enc->add_option("--out", cfg.out_path, "ciphertext file");
  c_enc->callback([&] { cmd_ue_enc(cfg); });

  CLI::App* c_dec = c_ue->add_subcommand("dec", "decrypt at the matching "
                                                "epoch");
  add_store(c_dec);
  c_dec->add_option("--instance", cfg.instance_path);
  c_dec->add_option("--key", cfg.key_path);
  c_dec->add_option("--ct", cfg.ct_path, "ciphertext file")->required();
  c_dec->callback([&] { cmd_ue_dec(cfg); });

  CLI::App* c_next = c_ue->add_subcommand(
      "next", "rotate the epoch key and emit the update token");
  add_store(c_next);
  add_entropy_flag(c_next, cfg);
  c_next->add_option("--instance", cfg.instance_path);
  c_next->add_option("--key", cfg.key_path);
  c_next->add_option("--token", cfg.token_path, "token output file");
  c_next->callback([&] { cmd_ue_next(cfg); });

  CLI::App* c_upd = c_ue->add_subcommand(
      "upd", "host-side ciphertext rotation using a token");
  add_store(c_upd);
  c_upd->add_option("--instance", cfg.instance_path);
  c_upd->add_option("--token", cfg.token_path, "token file")->required();
  c_upd->add_option("--ct", cfg.ct_path, "ciphertext file")->required();
  c_upd->add_option("--out", cfg.out_path,
                    "output file (default: rewrite --ct in place)");
  c_upd->callback([&] { cmd_ue_upd(cfg); });

  CLI::App* c_demo = c_ue->add_subcommand(
      "demo", "multi-epoch owner/host simulation with reports");
  add_params_flags(c_demo, cfg);
  add_entropy_flag(c_demo, cfg);
  c_demo->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  c_demo->add_option("--threads", cfg.threads,
                     "worker threads (1 = serial)");
  c_demo->callback([&] { cmd_ue_demo(cfg); });

  CLI::App* c_bench = app.add_subcommand("bench", "evaluation timing and "
                                                  "incremental counts");
  add_entropy_flag(c_bench, cfg);
  c_bench->add_option("--n", cfg.bench_n)->check(CLI::PositiveNumber);
  c_bench->add_option("--q", cfg.bench_q)->check(CLI::PositiveNumber);
  c_bench->add_option("--p", cfg.bench_p)->check(CLI::PositiveNumber);
  c_bench->add_option("--sizes", cfg.sizes, "leaf counts, powers of two")
      ->delimiter(',');
  c_bench->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  c_bench->callback([&] { cmd_bench(cfg); });

  CLI::App* c_selftest = app.add_subcommand(
      "selftest", "run every module invariant at the given parameters");
  add_params_flags(c_selftest, cfg);
  add_entropy_flag(c_selftest, cfg);
  c_selftest->callback([&] { cmd_selftest(cfg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 4;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violation: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return g_selftest_status;
}

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

#include "kih/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kih/errors.hpp"

namespace kih {

namespace {

constexpr std::uint32_t kVersion = 1;
// Length-prefixed blocks are capped well above any legitimate payload
// (the largest is a literal tree descriptor) so a corrupt length field
// cannot trigger a huge allocation.
constexpr std::uint64_t kMaxBlock = 1ull << 22;
constexpr std::uint64_t kMaxDim = 1ull << 20;
constexpr std::uint64_t kMaxEntries = 1ull << 27;

void put_bytes(std::ostream& out, const void* data, std::size_t len) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) {
    b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  }
  put_bytes(out, b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  }
  put_bytes(out, b, 8);
}

void put_block(std::ostream& out, std::string_view bytes) {
  put_u64(out, bytes.size());
  put_bytes(out, bytes.data(), bytes.size());
}

std::string get_bytes(std::istream& in, std::size_t len) {
  std::string buf(len, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len) {
    throw FormatError("truncated input");
  }
  return buf;
}

std::uint32_t get_u32(std::istream& in) {
  const std::string b = get_bytes(in, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i]))
         << (8 * i);
  }
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  const std::string b = get_bytes(in, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i]))
         << (8 * i);
  }
  return v;
}

std::string get_block(std::istream& in) {
  const std::uint64_t len = get_u64(in);
  if (len > kMaxBlock) {
    throw FormatError("block length out of range");
  }
  return get_bytes(in, static_cast<std::size_t>(len));
}

void put_magic(std::ostream& out, const char* magic) {
  put_bytes(out, magic, 4);
}

void expect_magic(std::istream& in, const char* magic, const char* what) {
  const std::string got = get_bytes(in, 4);
  if (got != std::string_view(magic, 4)) {
    throw FormatError(std::string("bad magic: expected ") + what);
  }
}

void expect_version(std::istream& in) {
  if (get_u32(in) != kVersion) {
    throw FormatError("unsupported format version");
  }
}

void check_bit_string(std::string_view s, const char* what) {
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw FormatError(std::string(what) + ": not a bit string");
    }
  }
}

// Shared body of KIHM payloads: dimensions, modulus (0 marks an
// integer decomposition matrix), then the raw entries.
void put_matrix_body(std::ostream& out, std::uint64_t rows,
                     std::uint64_t cols, std::uint64_t modulus,
                     std::span<const std::uint64_t> entries) {
  put_u64(out, rows);
  put_u64(out, cols);
  put_u64(out, modulus);
  for (std::uint64_t e : entries) {
    put_u64(out, e);
  }
}

struct MatrixBody {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> entries;
};

MatrixBody get_matrix_body(std::istream& in) {
  MatrixBody b;
  b.rows = get_u64(in);
  b.cols = get_u64(in);
  b.modulus = get_u64(in);
  if (b.rows > kMaxDim || b.cols > kMaxDim ||
      b.rows * b.cols > kMaxEntries) {
    throw FormatError("matrix dimensions out of range");
  }
  const std::size_t count = static_cast<std::size_t>(b.rows * b.cols);
  const std::string raw = get_bytes(in, count * 8);
  b.entries.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(raw[i * 8 + k]))
           << (8 * k);
    }
    b.entries[i] = v;
  }
  return b;
}

void put_params(std::ostream& out, const Params& params) {
  put_u32(out, params.n);
  put_u64(out, params.q);
  put_u64(out, params.p);
  put_block(out, params.tree_desc);
  put_block(out, std::string_view(
                     reinterpret_cast<const char*>(params.prg_salt.data()),
                     params.prg_salt.size()));
}

Params get_params(std::istream& in) {
  const std::uint32_t n = get_u32(in);
  const std::uint64_t q = get_u64(in);
  const std::uint64_t p = get_u64(in);
  std::string tree = get_block(in);
  const std::string salt = get_block(in);
  try {
    return Params::make(n, q, p, std::move(tree),
                        std::vector<std::uint8_t>(salt.begin(), salt.end()));
  } catch (const Error& e) {
    throw FormatError(std::string("stored parameters invalid: ") + e.what());
  }
}

ModMatrix matrix_from_body(const MatrixBody& b) {
  if (b.modulus == 0) {
    throw FormatError("integer matrix where a modular one was expected");
  }
  for (std::uint64_t e : b.entries) {
    if (e >= b.modulus) {
      throw FormatError("matrix entry not reduced by its modulus");
    }
  }
  try {
    return ModMatrix::from_entries(static_cast<std::size_t>(b.rows),
                                   static_cast<std::size_t>(b.cols),
                                   b.modulus, b.entries);
  } catch (const Error& e) {
    throw FormatError(std::string("stored matrix invalid: ") + e.what());
  }
}

void check_seed_shape(const Params& params, const ModMatrix& s) {
  if (s.rows() != params.n || s.cols() != params.nd() ||
      s.modulus() != params.q) {
    throw FormatError("stored seed does not match its parameter block");
  }
}

}  // namespace

void write_matrix(std::ostream& out, const ModMatrix& m) {
  put_magic(out, "KIHM");
  put_u32(out, kVersion);
  put_matrix_body(out, m.rows(), m.cols(), m.modulus(), m.entries());
}

ModMatrix read_matrix(std::istream& in) {
  expect_magic(in, "KIHM", "matrix");
  expect_version(in);
  return matrix_from_body(get_matrix_body(in));
}

void write_decomp(std::ostream& out, const Decomp& d) {
  put_magic(out, "KIHM");
  put_u32(out, kVersion);
  put_matrix_body(out, d.rows(), d.cols(), 0, d.entries());
}

Decomp read_decomp(std::istream& in) {
  expect_magic(in, "KIHM", "matrix");
  expect_version(in);
  const MatrixBody b = get_matrix_body(in);
  if (b.modulus != 0) {
    throw FormatError("modular matrix where an integer one was expected");
  }
  Decomp d(static_cast<std::size_t>(b.rows),
           static_cast<std::size_t>(b.cols));
  for (std::uint64_t i = 0; i < b.rows; ++i) {
    for (std::uint64_t j = 0; j < b.cols; ++j) {
      d.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
            b.entries[static_cast<std::size_t>(i * b.cols + j)]);
    }
  }
  return d;
}

void write_instance(std::ostream& out, const PrfInstance& inst) {
  put_magic(out, "KIHP");
  put_u32(out, kVersion);
  put_u32(out, 1);  // kind: instance
  put_params(out, inst.params());
  write_matrix(out, inst.a0());
  write_matrix(out, inst.a1());
}

PrfInstance read_instance(std::istream& in) {
  expect_magic(in, "KIHP", "instance");
  expect_version(in);
  const std::uint32_t kind = get_u32(in);
  if (kind == 2) {
    throw FormatError("file holds a seed, not an instance");
  }
  if (kind != 1) {
    throw FormatError("unknown instance-file kind");
  }
  Params params = get_params(in);
  ModMatrix a0 = read_matrix(in);
  ModMatrix a1 = read_matrix(in);
  try {
    return PrfInstance(std::move(params), std::move(a0), std::move(a1));
  } catch (const Error& e) {
    throw FormatError(std::string("stored instance invalid: ") + e.what());
  }
}

void write_seed(std::ostream& out, const Params& params, const Seed& seed) {
  put_magic(out, "KIHP");
  put_u32(out, kVersion);
  put_u32(out, 2);  // kind: seed
  put_params(out, params);
  write_matrix(out, seed.s);
}

std::pair<Params, Seed> read_seed(std::istream& in) {
  expect_magic(in, "KIHP", "seed");
  expect_version(in);
  const std::uint32_t kind = get_u32(in);
  if (kind == 1) {
    throw FormatError("file holds an instance, not a seed");
  }
  if (kind != 2) {
    throw FormatError("unknown seed-file kind");
  }
  Params params = get_params(in);
  ModMatrix s = read_matrix(in);
  check_seed_shape(params, s);
  return {std::move(params), Seed{std::move(s)}};
}

void write_constrained_key(std::ostream& out, const ConstrainedKey& ck) {
  put_magic(out, "KIHC");
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(ck.side));
  put_u32(out, static_cast<std::uint32_t>(ck.mode));
  put_block(out, ck.x0);
  put_block(out, ck.instance);
  write_matrix(out, ck.value);
}

ConstrainedKey read_constrained_key(std::istream& in) {
  expect_magic(in, "KIHC", "constrained key");
  expect_version(in);
  const std::uint32_t side = get_u32(in);
  const std::uint32_t mode = get_u32(in);
  if (side > 1 || mode > 1) {
    throw FormatError("constrained key: unknown side or mode");
  }
  ConstrainedKey ck;
  ck.side = static_cast<ConstrainSide>(side);
  ck.mode = static_cast<ConstrainMode>(mode);
  ck.x0 = get_block(in);
  check_bit_string(ck.x0, "constrained key x0");
  ck.instance = get_block(in);
  if (ck.instance.size() != 32 ||
      ck.instance.find_first_not_of("0123456789abcdef") !=
          std::string::npos) {
    throw FormatError("constrained key: malformed instance digest");
  }
  ck.value = read_matrix(in);
  return ck;
}

void write_epoch_key(std::ostream& out, const Params& params,
                     const EpochKey& ki) {
  put_magic(out, "KIHU");
  put_u32(out, kVersion);
  put_u32(out, 1);  // kind: epoch key
  put_params(out, params);
  put_u64(out, ki.epoch);
  write_matrix(out, ki.k.s);
  put_block(out, ki.nonce);
}

std::pair<Params, EpochKey> read_epoch_key(std::istream& in) {
  expect_magic(in, "KIHU", "epoch key");
  expect_version(in);
  const std::uint32_t kind = get_u32(in);
  if (kind != 1) {
    throw FormatError("file does not hold an epoch key");
  }
  Params params = get_params(in);
  EpochKey ki;
  ki.epoch = get_u64(in);
  ki.k.s = read_matrix(in);
  check_seed_shape(params, ki.k.s);
  ki.nonce = get_block(in);
  check_bit_string(ki.nonce, "epoch key nonce");
  return {std::move(params), std::move(ki)};
}

void write_update_token(std::ostream& out, const Params& params,
                        const UpdateToken& tok) {
  put_magic(out, "KIHU");
  put_u32(out, kVersion);
  put_u32(out, 2);  // kind: update token
  put_params(out, params);
  put_u64(out, tok.epoch);
  write_matrix(out, tok.dk.s);
  put_block(out, tok.dn.render());
}

std::pair<Params, UpdateToken> read_update_token(std::istream& in) {
  expect_magic(in, "KIHU", "update token");
  expect_version(in);
  const std::uint32_t kind = get_u32(in);
  if (kind != 2) {
    throw FormatError("file does not hold an update token");
  }
  Params params = get_params(in);
  UpdateToken tok;
  tok.epoch = get_u64(in);
  tok.dk.s = read_matrix(in);
  check_seed_shape(params, tok.dk.s);
  try {
    tok.dn = SymbolString::parse(get_block(in));
  } catch (const Error& e) {
    throw FormatError(std::string("update token: bad nonce delta: ") +
                      e.what());
  }
  return {std::move(params), std::move(tok)};
}

void write_ciphertext(std::ostream& out, const Ciphertext& c) {
  put_magic(out, "KIHU");
  put_u32(out, kVersion);
  put_u32(out, 3);  // kind: ciphertext
  put_u64(out, c.epoch);
  put_block(out, c.data_id);
  put_u32(out, static_cast<std::uint32_t>(c.mode));
  put_u64(out, c.t);
  write_matrix(out, c.body);
}

Ciphertext read_ciphertext(std::istream& in) {
  expect_magic(in, "KIHU", "ciphertext");
  expect_version(in);
  const std::uint32_t kind = get_u32(in);
  if (kind != 3) {
    throw FormatError("file does not hold a ciphertext");
  }
  Ciphertext c;
  c.epoch = get_u64(in);
  c.data_id = get_block(in);
  check_bit_string(c.data_id, "ciphertext data id");
  const std::uint32_t mode = get_u32(in);
  if (mode > 1) {
    throw FormatError("ciphertext: unknown message mode");
  }
  c.mode = static_cast<MsgMode>(mode);
  c.t = get_u64(in);
  if (c.mode == MsgMode::kRaw ? c.t != 0 : c.t < 2) {
    throw FormatError("ciphertext: alphabet size inconsistent with mode");
  }
  c.body = read_matrix(in);
  return c;
}

void save_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot open for writing: " + path);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw FormatError("write failed: " + path);
  }
}

std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open: " + path);
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw FormatError("read failed: " + path);
  }
  return bytes;
}

}  // namespace kih

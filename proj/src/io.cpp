// Copyright 2026 The hspc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hspc/io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <system_error>

#include "hspc/errors.hpp"

namespace hspc {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_le(const std::vector<std::uint8_t>& in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) v |= static_cast<std::uint64_t>(in[pos + b]) << (8 * b);
  return v;
}

// Parses the oracle header and table; returns the offset just past the table.
std::size_t parse_table(const std::vector<std::uint8_t>& bytes, Oracle& f) {
  if (bytes.size() < 8) throw IoError("oracle table truncated: missing header");
  const auto n = get_le(bytes, 0, 4), m = get_le(bytes, 4, 4);
  if (n < 1 || n > kMaxGroupBits || m < 1 || m > 32) throw IoError("oracle table header out of range");
  const std::size_t count = std::size_t{1} << n;
  if (bytes.size() < 8 + 8 * count) throw IoError("oracle table truncated: expected 2^n values");
  std::vector<std::uint64_t> table(count);
  for (std::size_t i = 0; i < count; ++i) table[i] = get_le(bytes, 8 + 8 * i, 8);
  try {
    f = Oracle(static_cast<int>(n), static_cast<int>(m), std::move(table));
  } catch (const std::exception& e) {
    throw IoError(std::string("invalid oracle table: ") + e.what());
  }
  return 8 + 8 * count;
}

bool is_json(const std::filesystem::path& path) { return path.extension() == ".json"; }

}  // namespace

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const std::filesystem::path& path) {
  auto b = read_bytes(path);
  return {b.begin(), b.end()};
}

void atomic_write(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

void atomic_write(const std::filesystem::path& path, const std::string& text) {
  atomic_write(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::vector<std::uint8_t> encode_oracle(const Oracle& f) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + 8 * f.table.size());
  put_u32(out, static_cast<std::uint32_t>(f.n));
  put_u32(out, static_cast<std::uint32_t>(f.m));
  for (auto v : f.table) put_u64(out, v);
  return out;
}

Oracle decode_oracle(const std::vector<std::uint8_t>& bytes) {
  Oracle f;
  if (parse_table(bytes, f) != bytes.size()) throw IoError("trailing bytes after oracle table");
  return f;
}

std::vector<std::uint8_t> encode_database(const Database& db, int m) {
  const auto d = db.values.size();
  Oracle f(std::countr_zero(d), m, db.values);
  auto out = encode_oracle(f);
  std::vector<std::uint8_t> mask((d + 7) / 8, 0);
  for (std::size_t i = 0; i < d; ++i)
    if (db.free_mask[i]) mask[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  out.insert(out.end(), mask.begin(), mask.end());
  return out;
}

std::pair<Database, int> decode_database(const std::vector<std::uint8_t>& bytes) {
  Oracle f;
  const std::size_t pos = parse_table(bytes, f);
  const std::size_t d = f.table.size();
  if (bytes.size() != pos + (d + 7) / 8) throw IoError("database free mask has the wrong length");
  Database db(f.table);
  for (std::size_t i = 0; i < d; ++i) db.free_mask[i] = (bytes[pos + i / 8] >> (i % 8)) & 1;
  if (db.free_mask[0]) throw IoError("database marks index 0 free");
  return {std::move(db), f.m};
}

nlohmann::json oracle_to_json(const Oracle& f) { return {{"n", f.n}, {"m", f.m}, {"values", f.table}}; }

Oracle oracle_from_json(const nlohmann::json& j) {
  try {
    return Oracle(j.at("n").get<int>(), j.at("m").get<int>(), j.at("values").get<std::vector<std::uint64_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed oracle JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid oracle JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw IoError(std::string("invalid oracle JSON: ") + e.what());
  }
}

Oracle load_oracle(const std::filesystem::path& path) {
  if (is_json(path)) {
    try {
      return oracle_from_json(nlohmann::json::parse(read_text(path)));
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  return decode_oracle(read_bytes(path));
}

void save_oracle(const std::filesystem::path& path, const Oracle& f) {
  if (is_json(path))
    atomic_write(path, oracle_to_json(f).dump() + "\n");
  else
    atomic_write(path, encode_oracle(f));
}

std::pair<Database, int> load_database(const std::filesystem::path& path) {
  if (is_json(path)) {
    auto f = load_oracle(path);
    return {Database(f.table), f.m};
  }
  auto bytes = read_bytes(path);
  if (bytes.size() >= 8) {
    const auto n = get_le(bytes, 0, 4);
    if (n >= 1 && n <= kMaxGroupBits && bytes.size() == 8 + 8 * (std::size_t{1} << n)) {
      auto f = decode_oracle(bytes);
      return {Database(f.table), f.m};
    }
  }
  return decode_database(bytes);
}

void save_database(const std::filesystem::path& path, const Database& db, int m) {
  atomic_write(path, encode_database(db, m));
}

CompressedMessage load_message(const std::filesystem::path& path) {
  if (is_json(path)) {
    try {
      return message_from_json(nlohmann::json::parse(read_text(path)));
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  return deserialize_message(read_bytes(path));
}

void save_message(const std::filesystem::path& path, const CompressedMessage& msg) {
  if (is_json(path))
    atomic_write(path, message_to_json(msg).dump(2) + "\n");
  else
    atomic_write(path, serialize_message(msg));
}

nlohmann::json states_to_json(const std::vector<StateVector>& states) {
  if (states.empty()) throw ShapeError("no states to write");
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : states) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& a : s.amplitudes()) amps.push_back({a.real(), a.imag()});
    arr.push_back(std::move(amps));
  }
  return {{"n", states.front().num_qubits()}, {"states", std::move(arr)}};
}

std::vector<StateVector> states_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<StateVector> out;
    for (const auto& s : j.at("states")) {
      std::vector<Complex> amps;
      for (const auto& a : s) amps.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
      auto psi = StateVector::from_amplitudes(std::move(amps));
      if (psi.num_qubits() != n) throw IoError("state fixture amplitude count does not match n");
      if (std::abs(psi.norm_squared() - 1.0) > 1e-9) throw IoError("state fixture entry is not normalised");
      out.push_back(std::move(psi));
    }
    if (out.empty()) throw IoError("state fixture has no states");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed state fixture: ") + e.what());
  } catch (const ShapeError& e) {
    throw IoError(std::string("malformed state fixture: ") + e.what());
  }
}

}  // namespace hspc

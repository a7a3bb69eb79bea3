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

#pragma once

/**
 * @file
 * File formats.
 *
 * Oracle table (little-endian): u32 n, u32 m, then 2^n u64 values.
 * Database: an oracle table followed by the free mask, ceil(2^n / 8) bytes,
 * bit i of the mask stored in byte i / 8 at bit position i % 8.
 * Oracle JSON: {"n": n, "m": m, "values": [...]}.
 * State fixture JSON: {"n": n, "states": [[[re, im], ...], ...]}.
 */

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hspc/compress_db.hpp"
#include "hspc/qsim.hpp"

namespace hspc {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
/// Writes to a temporary sibling file, then renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void atomic_write(const std::filesystem::path& path, const std::string& text);

std::vector<std::uint8_t> encode_oracle(const Oracle& f);
Oracle decode_oracle(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_database(const Database& db, int m);
/// Returns the database and its value width.
std::pair<Database, int> decode_database(const std::vector<std::uint8_t>& bytes);

nlohmann::json oracle_to_json(const Oracle& f);
Oracle oracle_from_json(const nlohmann::json& j);

/// Loads an oracle table; files ending in ".json" use the JSON form.
Oracle load_oracle(const std::filesystem::path& path);
void save_oracle(const std::filesystem::path& path, const Oracle& f);

/// Loads either a database file or a plain oracle table (all slots occupied).
std::pair<Database, int> load_database(const std::filesystem::path& path);
void save_database(const std::filesystem::path& path, const Database& db, int m);

CompressedMessage load_message(const std::filesystem::path& path);
void save_message(const std::filesystem::path& path, const CompressedMessage& msg);

nlohmann::json states_to_json(const std::vector<StateVector>& states);
std::vector<StateVector> states_from_json(const nlohmann::json& j);

}  // namespace hspc

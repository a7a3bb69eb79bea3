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
 * The compressed message: group parameters, subgroup generator and one value
 * per coset, with a bit-exact binary form and a JSON mirror.
 *
 * Binary layout (bits packed most significant first, each field starting
 * on a byte boundary):
 *
 *     "HSPC"              4 bytes
 *     version             u8 (= 1)
 *     n, m                u8, u8
 *     theta_qft           n(n-1)/2 bits, padded
 *     theta_perm          n(n-1)/2 bits, padded
 *     generator           n bits, padded
 *     count               u32, big-endian
 *     values              count * m bits, padded
 *
 * Coset representatives are not stored: record k belongs to the k-th
 * tau-smallest coset minimum of the subgroup generated by `generator`.
 */

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hspc/group.hpp"

namespace hspc {

struct CosetValue {
  Element representative = 0;
  std::uint64_t value = 0;
  bool operator==(const CosetValue&) const = default;
};

struct CompressedMessage {
  int n = 0;
  int m = 0;
  std::vector<std::uint8_t> theta_qft;
  std::vector<std::uint8_t> theta_perm;
  Element generator = 0;
  std::vector<CosetValue> coset_values;

  /// Throws IntegrityError when the parameters do not decode to a group.
  GroupStructure group() const;
  Subgroup subgroup() const;

  bool operator==(const CompressedMessage&) const = default;
};

/// Builds the message for values of `sequence` on the cosets of <generator>.
CompressedMessage make_message(const GroupStructure& g, Element generator, int m,
                               const std::vector<std::uint64_t>& sequence);

/// Checks every structural invariant; throws IntegrityError on the first violation.
void validate_message(const CompressedMessage& msg);

/// Reconstructs all 2^n values.  Throws IntegrityError if the stored cosets
/// overlap or fail to cover the group.
std::vector<std::uint64_t> decode(const CompressedMessage& msg);

std::vector<std::uint8_t> serialize_message(const CompressedMessage& msg);
CompressedMessage deserialize_message(const std::vector<std::uint8_t>& bytes);
/// Exact payload length in bits, padding included.
std::size_t serialized_bits(const CompressedMessage& msg);
/// Bits spent on magic, version, n, m, count and byte-alignment padding.
std::size_t header_bits(const CompressedMessage& msg);

nlohmann::json message_to_json(const CompressedMessage& msg);
CompressedMessage message_from_json(const nlohmann::json& j);

}  // namespace hspc

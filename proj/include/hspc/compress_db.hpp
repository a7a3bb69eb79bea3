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
 * Databases with planted hidden-subgroup symmetry, logical deletion through
 * a free mask, and compression-ratio accounting.
 */

#include <cstdint>
#include <vector>

#include "hspc/group.hpp"
#include "hspc/message.hpp"
#include "hspc/rng.hpp"

namespace hspc {

struct HspDataSpec {
  GroupStructure group;
  Subgroup hidden;
  int m = 1;
  std::uint64_t seed = 0;
};

/// One distinct m-bit value per coset, so f(a) = f(b) iff a^{-1} b is in H.
/// With `ordered` the k-th coset (in tau order of its minimum) gets value k;
/// otherwise values are drawn uniformly without replacement.
std::vector<std::uint64_t> generate_hsp_sequence(const HspDataSpec& spec, Rng& rng, bool ordered = false);

struct Database {
  std::vector<std::uint64_t> values;
  std::vector<std::uint8_t> free_mask;  ///< 1 = free (overwritable)

  Database() = default;
  explicit Database(std::vector<std::uint64_t> values);
  std::size_t occupied() const;
};

/// c(i) = 1 iff i is not the tau-minimal element of its coset.
std::vector<std::uint8_t> characteristic_function(const GroupStructure& g, const Subgroup& h);

/// Marks every non-representative slot free.  Throws VerificationError if the
/// message does not reproduce the database contents.
Database compress_database(const Database& db, const CompressedMessage& msg);

/// f(i), read from the representative slot of i's coset.
std::uint64_t query_db(const Database& db, const CompressedMessage& msg, Element i);

/// Precomputed query map for repeated lookups against one message.
class QueryIndex {
 public:
  explicit QueryIndex(const CompressedMessage& msg);
  Element slot(Element i) const;
  std::uint64_t query(const Database& db, Element i) const;

 private:
  std::vector<Element> rep_;
};

/// Bound n^2 / (2^n m) + 1 / |H| on compressed over raw size.
double compression_ratio(int n, int m, std::uint64_t subgroup_size);

/// Fills every free slot with values from `rng` and checks that all queries
/// still return `original`.
bool adversarial_overwrite_check(const Database& compressed, const CompressedMessage& msg,
                                 const std::vector<std::uint64_t>& original, Rng& rng);

}  // namespace hspc

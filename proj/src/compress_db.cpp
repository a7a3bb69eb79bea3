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

#include "hspc/compress_db.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "hspc/errors.hpp"

namespace hspc {

std::vector<std::uint64_t> generate_hsp_sequence(const HspDataSpec& spec, Rng& rng, bool ordered) {
  const auto& g = spec.group;
  if (!(spec.hidden.parent() == g)) throw InvariantError("hidden subgroup belongs to a different group");
  if (spec.m < 1 || spec.m > 32) throw ShapeError("value width m must be in [1, 32]");
  const auto reps = coset_representative_table(g, spec.hidden);
  const std::uint64_t num_cosets = g.order() / spec.hidden.size();
  const std::uint64_t space = std::uint64_t{1} << spec.m;
  if (space < num_cosets)
    throw CapacityError(std::to_string(num_cosets) + " cosets need distinct values but m=" + std::to_string(spec.m) +
                        " allows only " + std::to_string(space));

  std::vector<std::uint64_t> labels(num_cosets);
  if (ordered) {
    std::iota(labels.begin(), labels.end(), std::uint64_t{0});
  } else if (space <= 4 * num_cosets) {
    std::vector<std::uint64_t> pool(space);
    std::iota(pool.begin(), pool.end(), std::uint64_t{0});
    for (std::uint64_t k = 0; k < num_cosets; ++k) std::swap(pool[k], pool[k + rng.below(space - k)]);
    std::copy_n(pool.begin(), num_cosets, labels.begin());
  } else {
    std::unordered_set<std::uint64_t> used;
    for (auto& v : labels) {
      do v = rng.below(space);
      while (!used.insert(v).second);
    }
  }

  // Coset k (in tau order of minima) receives labels[k].
  std::vector<std::uint64_t> rank(g.order(), 0);
  std::uint64_t next = 0;
  for (Element i = 0; i < g.order(); ++i)
    if (reps[i] == i) rank[i] = next++;
  std::vector<std::uint64_t> seq(g.order());
  for (Element i = 0; i < g.order(); ++i) seq[i] = labels[rank[reps[i]]];
  return seq;
}

Database::Database(std::vector<std::uint64_t> v) : values(std::move(v)), free_mask(values.size(), 0) {
  const auto d = values.size();
  if (d < 2 || (d & (d - 1))) throw ShapeError("database length must be a power of two >= 2");
}

std::size_t Database::occupied() const {
  return static_cast<std::size_t>(std::count(free_mask.begin(), free_mask.end(), 0));
}

std::vector<std::uint8_t> characteristic_function(const GroupStructure& g, const Subgroup& h) {
  const auto reps = coset_representative_table(g, h);
  std::vector<std::uint8_t> c(g.order());
  for (Element i = 0; i < g.order(); ++i) c[i] = reps[i] != i;
  return c;
}

Database compress_database(const Database& db, const CompressedMessage& msg) {
  std::vector<std::uint64_t> rebuilt;
  try {
    rebuilt = decode(msg);
  } catch (const IntegrityError& e) {
    throw VerificationError(std::string("message cannot be decoded: ") + e.what());
  }
  if (rebuilt.size() != db.values.size()) throw VerificationError("message and database sizes differ");
  for (std::size_t i = 0; i < rebuilt.size(); ++i)
    if (rebuilt[i] != db.values[i])
      throw VerificationError("message disagrees with the database at index " + std::to_string(i));
  Database out = db;
  out.free_mask = characteristic_function(msg.group(), msg.subgroup());
  return out;
}

std::uint64_t query_db(const Database& db, const CompressedMessage& msg, Element i) {
  if (i >= db.values.size()) throw RangeError("query index out of range");
  return db.values[mod_h(msg.group(), msg.subgroup(), i)];
}

QueryIndex::QueryIndex(const CompressedMessage& msg) : rep_(coset_representative_table(msg.group(), msg.subgroup())) {}

Element QueryIndex::slot(Element i) const {
  if (i >= rep_.size()) throw RangeError("query index out of range");
  return rep_[i];
}

std::uint64_t QueryIndex::query(const Database& db, Element i) const { return db.values[slot(i)]; }

double compression_ratio(int n, int m, std::uint64_t subgroup_size) {
  if (n < 1 || m < 1 || subgroup_size < 1) throw ParameterError("compression_ratio arguments must be positive");
  if (n < 63 && (subgroup_size > (std::uint64_t{1} << n) || ((std::uint64_t{1} << n) % subgroup_size)))
    throw ParameterError("subgroup size must divide 2^n");
  return static_cast<double>(n) * n / (std::ldexp(1.0, n) * m) + 1.0 / static_cast<double>(subgroup_size);
}

bool adversarial_overwrite_check(const Database& compressed, const CompressedMessage& msg,
                                 const std::vector<std::uint64_t>& original, Rng& rng) {
  Database garbled = compressed;
  const std::uint64_t space = std::uint64_t{1} << msg.m;
  for (std::size_t i = 0; i < garbled.values.size(); ++i)
    if (garbled.free_mask[i]) garbled.values[i] = rng.below(space);
  QueryIndex index(msg);
  for (Element i = 0; i < original.size(); ++i)
    if (index.query(garbled, i) != original[i]) return false;
  return true;
}

}  // namespace hspc

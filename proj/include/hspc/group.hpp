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
 * Finite Abelian groups of type Z_{2^m1} x ... x Z_{2^mq} realised on
 * n-bit strings, together with their subgroups, cosets and characters.
 *
 * Group elements are n-bit strings stored as integers under the tau map:
 * the first digit i_1 is the most significant bit, so the integer value of
 * an element is its index in the database.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hspc {

using Element = std::uint64_t;

/// Largest bit-string length handled by dense enumeration.
inline constexpr int kMaxGroupBits = 20;

// ---------------------------------------------------------------------------
// tau: bit strings <-> indices

/// tau(i_1 ... i_n) = sum_k i_k 2^{n-k}.
Element tau(std::span<const std::uint8_t> bits);
/// Inverse of tau; throws RangeError when index >= 2^n.
std::vector<std::uint8_t> tau_inv(Element index, int n);

/// Parses "0110" into its tau index.
Element parse_bits(std::string_view text);
std::string format_bits(Element value, int n);

// ---------------------------------------------------------------------------

/// Ordered integer composition (m_1, ..., m_q) of n.
class GroupType {
 public:
  explicit GroupType(std::vector<int> partition);

  static GroupType cyclic(int n) { return GroupType({n}); }
  static GroupType elementary(int n) { return GroupType(std::vector<int>(n, 1)); }

  /// Every ordered composition of n, in lexicographic order of cut points.
  static std::vector<GroupType> all(int n);

  int n() const { return n_; }
  int blocks() const { return static_cast<int>(partition_.size()); }
  const std::vector<int>& partition() const { return partition_; }
  int width(int block) const { return partition_[block]; }
  int offset(int block) const { return offsets_[block]; }
  /// M = 2^{max m_t}, the common modulus for character phases.
  std::uint64_t modulus() const { return modulus_; }
  bool is_elementary() const { return modulus_ == 2; }

  /// "Z8", "Z4xZ2", "Z2xZ2xZ2".
  std::string to_string() const;

  bool operator==(const GroupType& other) const { return partition_ == other.partition_; }

 private:
  std::vector<int> partition_;
  std::vector<int> offsets_;
  int n_ = 0;
  std::uint64_t modulus_ = 1;
};

/// Permutation of digit positions: permuted(i)_k = i_{mapping[k]} (0-based).
class BitPermutation {
 public:
  explicit BitPermutation(std::vector<int> mapping);
  static BitPermutation identity(int n);

  int n() const { return static_cast<int>(mapping_.size()); }
  const std::vector<int>& mapping() const { return mapping_; }
  bool is_identity() const;

  Element apply(Element bits) const;
  Element apply_inverse(Element bits) const;
  BitPermutation inverse() const;
  BitPermutation then(const BitPermutation& next) const;

  bool operator==(const BitPermutation& other) const { return mapping_ == other.mapping_; }

 private:
  std::vector<int> mapping_;
};

/// A group type assigned to the bit strings through a bit-permutation.
///
/// The operation permutes the digits of both operands, adds each block
/// modulo 2^{m_t}, and undoes the permutation, so the all-zeros string is
/// always the identity.
class GroupStructure {
 public:
  explicit GroupStructure(GroupType type);
  GroupStructure(GroupType type, BitPermutation perm);

  const GroupType& type() const { return type_; }
  const BitPermutation& perm() const { return perm_; }
  int n() const { return type_.n(); }
  std::uint64_t order() const { return std::uint64_t{1} << type_.n(); }

  Element op(Element a, Element b) const;
  Element inverse(Element a) const;
  /// a * a * ... * a (k times); k = 0 gives the identity.
  Element power(Element a, std::uint64_t k) const;

  /// Block values of the permuted string, one per factor Z_{2^{m_t}}.
  std::vector<std::uint64_t> components(Element a) const;
  Element from_components(std::span<const std::uint64_t> parts) const;

  /// Numerator r of chi_j(i) = exp(2 pi i r / M), M = type().modulus().
  std::uint64_t character_phase(Element j, Element i) const;
  bool character_trivial(Element j, Element i) const { return character_phase(j, i) == 0; }

  /// Text form accepted by parse_group_descriptor.
  std::string descriptor() const;

  bool operator==(const GroupStructure& other) const {
    return type_ == other.type_ && perm_ == other.perm_;
  }

 private:
  Element block_add(Element pa, Element pb) const;

  GroupType type_;
  BitPermutation perm_;
  std::vector<Element> masks_;
  std::vector<int> shifts_;
};

/// Parses "Z8", "Z4xZ2", "Z2xZ2xZ2@perm=2,0,1".
GroupStructure parse_group_descriptor(std::string_view text);

/// Subgroup of a GroupStructure, stored as its sorted element list.
class Subgroup {
 public:
  /// Builds from an element set; throws InvariantError if it is not closed.
  Subgroup(GroupStructure parent, std::vector<Element> elements);

  const GroupStructure& parent() const { return parent_; }
  const std::vector<Element>& elements() const { return elements_; }
  /// A generating set, greedily chosen in tau order.
  const std::vector<Element>& generators() const { return generators_; }
  /// The single generator when the subgroup is cyclic.
  std::optional<Element> cyclic_generator() const;
  std::uint64_t size() const { return elements_.size(); }
  bool contains(Element e) const;
  bool is_trivial() const { return elements_.size() == 1; }

  bool operator==(const Subgroup& other) const {
    return parent_ == other.parent_ && elements_ == other.elements_;
  }

 private:
  GroupStructure parent_;
  std::vector<Element> elements_;
  std::vector<Element> generators_;
};

Element group_op(const GroupStructure& g, Element a, Element b);

/// Cyclic closure {0, s, s*s, ...}.
Subgroup subgroup_generated(const GroupStructure& g, Element s);
/// Closure of several generators.
Subgroup subgroup_generated(const GroupStructure& g, std::span<const Element> gens);
Subgroup whole_group(const GroupStructure& g);

/// rep[i] = tau-minimal element of the coset i*H, for every i.
std::vector<Element> coset_representative_table(const GroupStructure& g, const Subgroup& h);
/// Tau-ordered list of coset minima.
std::vector<Element> cosets(const GroupStructure& g, const Subgroup& h);
Element mod_h(const GroupStructure& g, const Subgroup& h, Element i);

/// H^perp = { j : chi_j(h) = 1 for every h in H }.
Subgroup orthogonal_group(const GroupStructure& g, const Subgroup& h);

// ---------------------------------------------------------------------------
// Binary circuit parameters <-> group structures.
//
// theta_{k,j} (1 <= k < j <= n) is stored row-major by k at position
// theta_index(n, k, j) with 0-based k < j. The perm vector holds the swap
// layers lambda_(n-1), lambda_(n-2), ..., lambda_(1) back to back.

std::size_t theta_count(int n);
std::size_t theta_index(int n, int k, int j);

/// Block-pattern switches that realise the QFT over `type`.
std::vector<std::uint8_t> qft_theta_for(const GroupType& type);
/// Partition encoded by a block pattern, or nullopt if the pattern is not one.
std::optional<GroupType> group_type_from_theta(std::span<const std::uint8_t> theta_qft, int n);
/// Permutation realised by the binary bubble network.
BitPermutation permutation_from_theta(std::span<const std::uint8_t> theta_perm, int n);
/// Bubble-network switches realising `perm`.
std::vector<std::uint8_t> perm_theta_for(const BitPermutation& perm);

std::optional<GroupStructure> decode_group_from_params(std::span<const std::uint8_t> theta_qft,
                                                       std::span<const std::uint8_t> theta_perm);

}  // namespace hspc

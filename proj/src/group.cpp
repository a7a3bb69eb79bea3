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

#include "hspc/group.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>

#include "hspc/errors.hpp"

namespace hspc {

namespace {

void check_bits(int n) {
  if (n < 1 || n > 62) throw ShapeError("bit-string length must be in [1, 62], got " + std::to_string(n));
}

void check_element(Element a, int n, const char* what) {
  if (a >> n) throw ShapeError(std::string(what) + " does not fit in " + std::to_string(n) + " bits");
}

// Membership bitmap spanned by `gens`, grown by repeated multiplication.
std::vector<char> span_mask(const GroupStructure& g, std::span<const Element> gens,
                            std::vector<Element>* out) {
  std::vector<char> in(g.order(), 0);
  std::vector<Element> elems{0};
  in[0] = 1;
  for (Element s : gens) {
    if (in[s]) continue;
    // Multiply the current span by successive powers of s until it closes.
    std::vector<Element> base = elems;
    Element p = s;
    while (!in[p]) {
      for (Element b : base) {
        Element e = g.op(b, p);
        if (!in[e]) {
          in[e] = 1;
          elems.push_back(e);
        }
      }
      p = g.op(p, s);
    }
  }
  if (out) *out = std::move(elems);
  return in;
}

}  // namespace

Element tau(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw ShapeError("tau: empty bit string");
  if (bits.size() > 63) throw ShapeError("tau: bit string too long");
  Element v = 0;
  for (auto b : bits) {
    if (b > 1) throw ShapeError("tau: digits must be 0 or 1");
    v = (v << 1) | b;
  }
  return v;
}

std::vector<std::uint8_t> tau_inv(Element index, int n) {
  check_bits(n);
  if (index >> n) throw RangeError("tau_inv: index " + std::to_string(index) + " out of range for n=" + std::to_string(n));
  std::vector<std::uint8_t> bits(n);
  for (int k = 0; k < n; ++k) bits[k] = (index >> (n - 1 - k)) & 1;
  return bits;
}

Element parse_bits(std::string_view text) {
  if (text.empty()) throw ShapeError("empty bit string");
  std::vector<std::uint8_t> bits;
  for (char c : text) {
    if (c != '0' && c != '1') throw ShapeError("invalid bit string '" + std::string(text) + "'");
    bits.push_back(c == '1');
  }
  return tau(bits);
}

std::string format_bits(Element value, int n) {
  std::string s(n, '0');
  for (int k = 0; k < n; ++k)
    if ((value >> (n - 1 - k)) & 1) s[k] = '1';
  return s;
}

// ---------------------------------------------------------------------------

GroupType::GroupType(std::vector<int> partition) : partition_(std::move(partition)) {
  if (partition_.empty()) throw ShapeError("group type needs at least one factor");
  int max_m = 0;
  for (int m : partition_) {
    if (m < 1) throw ShapeError("group factor exponents must be positive");
    offsets_.push_back(n_);
    n_ += m;
    max_m = std::max(max_m, m);
  }
  check_bits(n_);
  modulus_ = std::uint64_t{1} << max_m;
}

std::vector<GroupType> GroupType::all(int n) {
  check_bits(n);
  std::vector<GroupType> out;
  // Bit c of `cuts` set means a block boundary after position c.
  for (std::uint64_t cuts = 0; cuts < (std::uint64_t{1} << (n - 1)); ++cuts) {
    std::vector<int> part;
    int len = 1;
    for (int c = 0; c < n - 1; ++c) {
      if ((cuts >> (n - 2 - c)) & 1) {
        part.push_back(len);
        len = 1;
      } else {
        ++len;
      }
    }
    part.push_back(len);
    out.emplace_back(std::move(part));
  }
  return out;
}

std::string GroupType::to_string() const {
  std::string s;
  for (std::size_t t = 0; t < partition_.size(); ++t) {
    if (t) s += 'x';
    s += "Z" + std::to_string(std::uint64_t{1} << partition_[t]);
  }
  return s;
}

// ---------------------------------------------------------------------------

BitPermutation::BitPermutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  const int n = static_cast<int>(mapping_.size());
  if (n == 0) throw ShapeError("empty bit permutation");
  std::vector<char> seen(n, 0);
  for (int p : mapping_) {
    if (p < 0 || p >= n || seen[p]) throw ShapeError("bit permutation is not a bijection");
    seen[p] = 1;
  }
}

BitPermutation BitPermutation::identity(int n) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  return BitPermutation(std::move(m));
}

bool BitPermutation::is_identity() const {
  for (int k = 0; k < n(); ++k)
    if (mapping_[k] != k) return false;
  return true;
}

Element BitPermutation::apply(Element bits) const {
  const int len = n();
  Element out = 0;
  for (int k = 0; k < len; ++k) out |= ((bits >> (len - 1 - mapping_[k])) & 1) << (len - 1 - k);
  return out;
}

Element BitPermutation::apply_inverse(Element bits) const {
  const int len = n();
  Element out = 0;
  for (int k = 0; k < len; ++k) out |= ((bits >> (len - 1 - k)) & 1) << (len - 1 - mapping_[k]);
  return out;
}

BitPermutation BitPermutation::inverse() const {
  std::vector<int> inv(n());
  for (int k = 0; k < n(); ++k) inv[mapping_[k]] = k;
  return BitPermutation(std::move(inv));
}

BitPermutation BitPermutation::then(const BitPermutation& next) const {
  if (next.n() != n()) throw ShapeError("permutation sizes differ");
  // next.apply(apply(x))_k = apply(x)_{next[k]} = x_{mapping[next[k]]}
  std::vector<int> m(n());
  for (int k = 0; k < n(); ++k) m[k] = mapping_[next.mapping_[k]];
  return BitPermutation(std::move(m));
}

// ---------------------------------------------------------------------------

GroupStructure::GroupStructure(GroupType type)
    : GroupStructure(type, BitPermutation::identity(type.n())) {}

GroupStructure::GroupStructure(GroupType type, BitPermutation perm)
    : type_(std::move(type)), perm_(std::move(perm)) {
  if (perm_.n() != type_.n()) throw ShapeError("permutation length does not match group type");
  for (int t = 0; t < type_.blocks(); ++t) {
    const int m = type_.width(t);
    shifts_.push_back(type_.n() - type_.offset(t) - m);
    masks_.push_back((Element{1} << m) - 1);
  }
}

Element GroupStructure::block_add(Element pa, Element pb) const {
  Element out = 0;
  for (std::size_t t = 0; t < masks_.size(); ++t) {
    const Element x = (pa >> shifts_[t]) & masks_[t];
    const Element y = (pb >> shifts_[t]) & masks_[t];
    out |= ((x + y) & masks_[t]) << shifts_[t];
  }
  return out;
}

Element GroupStructure::op(Element a, Element b) const {
  check_element(a, n(), "left operand");
  check_element(b, n(), "right operand");
  if (perm_.is_identity()) return block_add(a, b);
  return perm_.apply_inverse(block_add(perm_.apply(a), perm_.apply(b)));
}

Element GroupStructure::inverse(Element a) const {
  check_element(a, n(), "operand");
  const Element pa = perm_.apply(a);
  Element out = 0;
  for (std::size_t t = 0; t < masks_.size(); ++t) {
    const Element x = (pa >> shifts_[t]) & masks_[t];
    out |= ((masks_[t] + 1 - x) & masks_[t]) << shifts_[t];
  }
  return perm_.apply_inverse(out);
}

Element GroupStructure::power(Element a, std::uint64_t k) const {
  check_element(a, n(), "operand");
  const Element pa = perm_.apply(a);
  Element out = 0;
  for (std::size_t t = 0; t < masks_.size(); ++t) {
    const Element x = (pa >> shifts_[t]) & masks_[t];
    out |= ((x * k) & masks_[t]) << shifts_[t];
  }
  return perm_.apply_inverse(out);
}

std::vector<std::uint64_t> GroupStructure::components(Element a) const {
  check_element(a, n(), "operand");
  const Element pa = perm_.apply(a);
  std::vector<std::uint64_t> parts(masks_.size());
  for (std::size_t t = 0; t < masks_.size(); ++t) parts[t] = (pa >> shifts_[t]) & masks_[t];
  return parts;
}

Element GroupStructure::from_components(std::span<const std::uint64_t> parts) const {
  if (parts.size() != masks_.size()) throw ShapeError("component count does not match group type");
  Element pa = 0;
  for (std::size_t t = 0; t < masks_.size(); ++t) {
    if (parts[t] > masks_[t]) throw RangeError("component exceeds its factor order");
    pa |= parts[t] << shifts_[t];
  }
  return perm_.apply_inverse(pa);
}

std::uint64_t GroupStructure::character_phase(Element j, Element i) const {
  check_element(j, n(), "character label");
  check_element(i, n(), "argument");
  const Element pj = perm_.apply(j);
  const Element pi = perm_.apply(i);
  const std::uint64_t M = type_.modulus();
  std::uint64_t r = 0;
  for (std::size_t t = 0; t < masks_.size(); ++t) {
    const std::uint64_t x = (pj >> shifts_[t]) & masks_[t];
    const std::uint64_t y = (pi >> shifts_[t]) & masks_[t];
    r = (r + (x * y % (masks_[t] + 1)) * (M / (masks_[t] + 1))) % M;
  }
  return r;
}

std::string GroupStructure::descriptor() const {
  std::string s = type_.to_string();
  if (!perm_.is_identity()) {
    s += "@perm=";
    for (int k = 0; k < n(); ++k) {
      if (k) s += ',';
      s += std::to_string(perm_.mapping()[k]);
    }
  }
  return s;
}

GroupStructure parse_group_descriptor(std::string_view text) {
  const auto bad = [&](const std::string& why) {
    return ShapeError("bad group descriptor '" + std::string(text) + "': " + why);
  };
  std::string_view head = text;
  std::string_view tail;
  if (auto at = text.find('@'); at != std::string_view::npos) {
    head = text.substr(0, at);
    tail = text.substr(at + 1);
  }
  std::vector<int> partition;
  while (!head.empty()) {
    if (head.front() != 'Z') throw bad("expected 'Z'");
    head.remove_prefix(1);
    auto x = head.find('x');
    std::string_view num = head.substr(0, x);
    std::uint64_t order = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), order);
    if (ec != std::errc() || ptr != num.data() + num.size() || order < 2 || (order & (order - 1)))
      throw bad("factor orders must be powers of two >= 2");
    partition.push_back(std::countr_zero(order));
    if (x == std::string_view::npos) break;
    head.remove_prefix(x + 1);
    if (head.empty()) throw bad("trailing 'x'");
  }
  if (partition.empty()) throw bad("no factors");
  GroupType type(std::move(partition));
  if (tail.empty()) return GroupStructure(type);
  if (tail.substr(0, 5) != "perm=") throw bad("expected '@perm='");
  tail.remove_prefix(5);
  std::vector<int> mapping;
  while (!tail.empty()) {
    auto c = tail.find(',');
    std::string_view num = tail.substr(0, c);
    int v = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc() || ptr != num.data() + num.size()) throw bad("bad permutation entry");
    mapping.push_back(v);
    if (c == std::string_view::npos) break;
    tail.remove_prefix(c + 1);
  }
  if (static_cast<int>(mapping.size()) != type.n()) throw bad("permutation length must equal n");
  return GroupStructure(type, BitPermutation(std::move(mapping)));
}

// ---------------------------------------------------------------------------

Subgroup::Subgroup(GroupStructure parent, std::vector<Element> elements)
    : parent_(std::move(parent)), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (elements_.empty() || elements_.front() != 0) throw InvariantError("subgroup must contain the identity");
  if (elements_.back() >= parent_.order()) throw InvariantError("subgroup element outside the parent group");

  // Greedy generating set; the set is a subgroup iff its span equals itself.
  std::vector<char> in(parent_.order(), 0);
  in[0] = 1;
  std::vector<Element> span{0};
  for (Element e : elements_) {
    if (in[e]) continue;
    generators_.push_back(e);
    in = span_mask(parent_, generators_, &span);
  }
  if (span.size() != elements_.size()) throw InvariantError("element set is not closed under the group operation");
}

std::optional<Element> Subgroup::cyclic_generator() const {
  if (generators_.empty()) return Element{0};
  if (generators_.size() == 1) return generators_.front();
  // In a 2-group the order of an element is the largest order among its components.
  const auto& type = parent_.type();
  for (Element e : elements_) {
    auto parts = parent_.components(e);
    std::uint64_t order = 1;
    for (int t = 0; t < type.blocks(); ++t) {
      if (parts[t] == 0) continue;
      const int m = type.width(t);
      order = std::max<std::uint64_t>(order, std::uint64_t{1} << (m - std::countr_zero(parts[t])));
    }
    if (order == elements_.size()) return e;
  }
  return std::nullopt;
}

bool Subgroup::contains(Element e) const { return std::binary_search(elements_.begin(), elements_.end(), e); }

Element group_op(const GroupStructure& g, Element a, Element b) { return g.op(a, b); }

Subgroup subgroup_generated(const GroupStructure& g, Element s) {
  check_element(s, g.n(), "generator");
  std::vector<Element> elems{0};
  for (Element p = s; p != 0; p = g.op(p, s)) elems.push_back(p);
  return Subgroup(g, std::move(elems));
}

Subgroup subgroup_generated(const GroupStructure& g, std::span<const Element> gens) {
  for (Element s : gens) check_element(s, g.n(), "generator");
  std::vector<Element> elems;
  span_mask(g, gens, &elems);
  return Subgroup(g, std::move(elems));
}

Subgroup whole_group(const GroupStructure& g) {
  std::vector<Element> all(g.order());
  std::iota(all.begin(), all.end(), Element{0});
  return Subgroup(g, std::move(all));
}

namespace {
void check_parent(const GroupStructure& g, const Subgroup& h) {
  if (!(h.parent() == g)) throw InvariantError("subgroup belongs to a different group structure");
}
}  // namespace

std::vector<Element> coset_representative_table(const GroupStructure& g, const Subgroup& h) {
  check_parent(g, h);
  constexpr Element unset = ~Element{0};
  std::vector<Element> rep(g.order(), unset);
  for (Element i = 0; i < g.order(); ++i) {
    if (rep[i] != unset) continue;
    for (Element e : h.elements()) rep[g.op(i, e)] = i;
  }
  return rep;
}

std::vector<Element> cosets(const GroupStructure& g, const Subgroup& h) {
  auto rep = coset_representative_table(g, h);
  std::vector<Element> out;
  out.reserve(g.order() / h.size());
  for (Element i = 0; i < g.order(); ++i)
    if (rep[i] == i) out.push_back(i);
  return out;
}

Element mod_h(const GroupStructure& g, const Subgroup& h, Element i) {
  check_parent(g, h);
  check_element(i, g.n(), "index");
  Element best = i;
  for (Element e : h.elements()) best = std::min(best, g.op(i, e));
  return best;
}

Subgroup orthogonal_group(const GroupStructure& g, const Subgroup& h) {
  check_parent(g, h);
  std::vector<Element> out;
  for (Element j = 0; j < g.order(); ++j) {
    bool ok = true;
    for (Element s : h.generators()) {
      if (!g.character_trivial(j, s)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(j);
  }
  return Subgroup(g, std::move(out));
}

// ---------------------------------------------------------------------------

std::size_t theta_count(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

std::size_t theta_index(int n, int k, int j) {
  if (k < 0 || j <= k || j >= n) throw RangeError("theta index requires 0 <= k < j < n");
  // Rows 0..k-1 hold (n-1) + (n-2) + ... + (n-k) entries.
  return static_cast<std::size_t>(k) * (2 * n - k - 1) / 2 + (j - k - 1);
}

std::vector<std::uint8_t> qft_theta_for(const GroupType& type) {
  const int n = type.n();
  std::vector<std::uint8_t> theta(theta_count(n), 0);
  for (int t = 0; t < type.blocks(); ++t) {
    const int lo = type.offset(t);
    const int hi = lo + type.width(t);
    for (int k = lo; k < hi; ++k)
      for (int j = k + 1; j < hi; ++j) theta[theta_index(n, k, j)] = 1;
  }
  return theta;
}

std::optional<GroupType> group_type_from_theta(std::span<const std::uint8_t> theta_qft, int n) {
  check_bits(n);
  if (theta_qft.size() != theta_count(n)) throw ShapeError("theta_qft length must be n(n-1)/2");
  // ends[k] = last wire coupled to wire k, provided row k is ones-then-zeros.
  std::vector<int> ends(n);
  for (int k = 0; k < n; ++k) {
    int e = k;
    bool zero_seen = false;
    for (int j = k + 1; j < n; ++j) {
      const auto v = theta_qft[theta_index(n, k, j)];
      if (v > 1) throw ShapeError("theta_qft entries must be binary");
      if (v) {
        if (zero_seen) return std::nullopt;
        e = j;
      } else {
        zero_seen = true;
      }
    }
    ends[k] = e;
  }
  std::vector<int> part;
  for (int k = 0; k < n;) {
    const int e = ends[k];
    for (int r = k; r <= e; ++r)
      if (ends[r] != e) return std::nullopt;
    part.push_back(e - k + 1);
    k = e + 1;
  }
  return GroupType(std::move(part));
}

namespace {
// Offset of the layer lambda_(t) in the perm vector, layers stored t = n-1 down to 1.
std::size_t layer_offset(int n, int t) {
  std::size_t off = 0;
  for (int u = n - 1; u > t; --u) off += u;
  return off;
}
}  // namespace

BitPermutation permutation_from_theta(std::span<const std::uint8_t> theta_perm, int n) {
  check_bits(n);
  if (theta_perm.size() != theta_count(n)) throw ShapeError("theta_perm length must be n(n-1)/2");
  // labels[p] = original digit position now sitting at position p.
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  for (int t = n - 1; t >= 1; --t) {
    const std::size_t off = layer_offset(n, t);
    for (int i = 0; i < t; ++i) {
      const auto v = theta_perm[off + i];
      if (v > 1) throw ShapeError("theta_perm entries must be binary");
      if (v) std::swap(labels[i], labels[i + 1]);
    }
  }
  return BitPermutation(std::move(labels));
}

std::vector<std::uint8_t> perm_theta_for(const BitPermutation& perm) {
  const int n = perm.n();
  std::vector<std::uint8_t> theta(theta_count(n), 0);
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  for (int t = n - 1; t >= 1; --t) {
    const int want = perm.mapping()[t];
    const int p = static_cast<int>(std::find(labels.begin(), labels.end(), want) - labels.begin());
    const std::size_t off = layer_offset(n, t);
    for (int i = p; i < t; ++i) {
      theta[off + i] = 1;
      std::swap(labels[i], labels[i + 1]);
    }
  }
  return theta;
}

std::optional<GroupStructure> decode_group_from_params(std::span<const std::uint8_t> theta_qft,
                                                       std::span<const std::uint8_t> theta_perm) {
  // Empty vectors decode to n = 1.
  int n = 1;
  while (theta_count(n) < theta_qft.size()) ++n;
  if (theta_count(n) != theta_qft.size()) throw ShapeError("theta_qft length is not n(n-1)/2");
  if (theta_perm.size() != theta_qft.size()) throw ShapeError("theta_perm length does not match theta_qft");
  auto type = group_type_from_theta(theta_qft, n);
  if (!type) return std::nullopt;
  return GroupStructure(*type, permutation_from_theta(theta_perm, n));
}

}  // namespace hspc

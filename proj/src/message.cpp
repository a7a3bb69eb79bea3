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

#include "hspc/message.hpp"

#include <algorithm>

#include "hspc/errors.hpp"

namespace hspc {

namespace {

constexpr std::uint8_t kVersion = 1;
constexpr char kMagic[4] = {'H', 'S', 'P', 'C'};

class BitWriter {
 public:
  void put(std::uint64_t v, int bits) {
    for (int b = bits - 1; b >= 0; --b) {
      if (used_ == 0) bytes_.push_back(0);
      if ((v >> b) & 1) bytes_.back() |= static_cast<std::uint8_t>(0x80 >> used_);
      used_ = (used_ + 1) % 8;
    }
  }
  void align() { used_ = 0; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  int used_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::uint64_t get(int bits) {
    std::uint64_t v = 0;
    for (int b = 0; b < bits; ++b) {
      if (pos_ / 8 >= bytes_.size()) throw IntegrityError("message truncated");
      v = (v << 1) | ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1);
      ++pos_;
    }
    return v;
  }
  void align() { pos_ = (pos_ + 7) / 8 * 8; }
  bool at_end() const { return pos_ / 8 >= bytes_.size(); }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::size_t padded(std::size_t bits) { return (bits + 7) / 8 * 8; }

}  // namespace

GroupStructure CompressedMessage::group() const {
  if (n < 1 || n > kMaxGroupBits) throw IntegrityError("message n out of range");
  if (theta_qft.size() != theta_count(n) || theta_perm.size() != theta_count(n))
    throw IntegrityError("message parameter vectors have the wrong length");
  for (auto v : theta_qft)
    if (v > 1) throw IntegrityError("message theta_qft is not binary");
  for (auto v : theta_perm)
    if (v > 1) throw IntegrityError("message theta_perm is not binary");
  auto type = group_type_from_theta(theta_qft, n);
  if (!type) throw IntegrityError("message theta_qft is not a valid block pattern");
  return GroupStructure(*type, permutation_from_theta(theta_perm, n));
}

Subgroup CompressedMessage::subgroup() const {
  auto g = group();
  if (generator >> n) throw IntegrityError("message generator does not fit in n bits");
  return subgroup_generated(g, generator);
}

CompressedMessage make_message(const GroupStructure& g, Element generator, int m,
                               const std::vector<std::uint64_t>& sequence) {
  if (sequence.size() != g.order()) throw ShapeError("sequence length must be 2^n");
  CompressedMessage msg;
  msg.n = g.n();
  msg.m = m;
  msg.theta_qft = qft_theta_for(g.type());
  msg.theta_perm = perm_theta_for(g.perm());
  msg.generator = generator;
  for (Element c : cosets(g, subgroup_generated(g, generator))) {
    if (sequence[c] >> m) throw RangeError("sequence value does not fit in m bits");
    msg.coset_values.push_back({c, sequence[c]});
  }
  return msg;
}

void validate_message(const CompressedMessage& msg) {
  if (msg.m < 1 || msg.m > 32) throw IntegrityError("message m out of range");
  auto g = msg.group();
  auto h = msg.subgroup();
  auto reps = cosets(g, h);
  if (reps.size() != msg.coset_values.size())
    throw IntegrityError("message stores " + std::to_string(msg.coset_values.size()) + " cosets, subgroup has " +
                         std::to_string(reps.size()));
  for (std::size_t k = 0; k < reps.size(); ++k) {
    if (msg.coset_values[k].representative != reps[k])
      throw IntegrityError("coset record " + std::to_string(k) + " has representative " +
                           format_bits(msg.coset_values[k].representative, msg.n) + ", expected " +
                           format_bits(reps[k], msg.n));
    if (msg.coset_values[k].value >> msg.m) throw IntegrityError("coset value does not fit in m bits");
  }
}

std::vector<std::uint64_t> decode(const CompressedMessage& msg) {
  auto g = msg.group();
  auto h = msg.subgroup();
  std::vector<std::uint64_t> out(g.order(), 0);
  std::vector<char> written(g.order(), 0);
  for (const auto& cv : msg.coset_values) {
    if (cv.representative >= g.order()) throw IntegrityError("coset representative out of range");
    for (Element e : h.elements()) {
      const Element pos = g.op(cv.representative, e);
      if (written[pos])
        throw IntegrityError("coset overlap: index " + format_bits(pos, msg.n) + " written twice (representative " +
                             format_bits(cv.representative, msg.n) + ")");
      written[pos] = 1;
      out[pos] = cv.value;
    }
  }
  auto hole = std::find(written.begin(), written.end(), 0);
  if (hole != written.end())
    throw IntegrityError("missing coset: index " + format_bits(hole - written.begin(), msg.n) + " never written");
  return out;
}

std::vector<std::uint8_t> serialize_message(const CompressedMessage& msg) {
  validate_message(msg);
  BitWriter w;
  for (char c : kMagic) w.put(static_cast<std::uint8_t>(c), 8);
  w.put(kVersion, 8);
  w.put(msg.n, 8);
  w.put(msg.m, 8);
  for (auto v : msg.theta_qft) w.put(v, 1);
  w.align();
  for (auto v : msg.theta_perm) w.put(v, 1);
  w.align();
  w.put(msg.generator, msg.n);
  w.align();
  w.put(msg.coset_values.size(), 32);
  for (const auto& cv : msg.coset_values) w.put(cv.value, msg.m);
  return w.take();
}

CompressedMessage deserialize_message(const std::vector<std::uint8_t>& bytes) {
  BitReader r(bytes);
  for (char c : kMagic)
    if (r.get(8) != static_cast<std::uint8_t>(c)) throw IntegrityError("bad magic; not a compressed message");
  if (auto v = r.get(8); v != kVersion) throw IntegrityError("unsupported message version " + std::to_string(v));
  CompressedMessage msg;
  msg.n = static_cast<int>(r.get(8));
  msg.m = static_cast<int>(r.get(8));
  if (msg.n < 1 || msg.n > kMaxGroupBits) throw IntegrityError("message n out of range");
  if (msg.m < 1 || msg.m > 32) throw IntegrityError("message m out of range");
  const std::size_t t = theta_count(msg.n);
  for (std::size_t k = 0; k < t; ++k) msg.theta_qft.push_back(static_cast<std::uint8_t>(r.get(1)));
  r.align();
  for (std::size_t k = 0; k < t; ++k) msg.theta_perm.push_back(static_cast<std::uint8_t>(r.get(1)));
  r.align();
  msg.generator = r.get(msg.n);
  r.align();
  const std::uint64_t count = r.get(32);
  auto g = msg.group();
  auto reps = cosets(g, msg.subgroup());
  if (count != reps.size())
    throw IntegrityError("coset count " + std::to_string(count) + " does not match the " + std::to_string(reps.size()) +
                         " cosets of the stored generator");
  for (std::uint64_t k = 0; k < count; ++k) msg.coset_values.push_back({reps[k], r.get(msg.m)});
  r.align();
  if (!r.at_end()) throw IntegrityError("trailing bytes after message payload");
  return msg;
}

std::size_t serialized_bits(const CompressedMessage& msg) {
  const std::size_t t = theta_count(msg.n);
  return 56 + 2 * padded(t) + padded(msg.n) + 32 + padded(msg.coset_values.size() * msg.m);
}

std::size_t header_bits(const CompressedMessage& msg) {
  const std::size_t t = theta_count(msg.n);
  const std::size_t payload = 2 * t + msg.n + msg.coset_values.size() * msg.m;
  return serialized_bits(msg) - payload;
}

nlohmann::json message_to_json(const CompressedMessage& msg) {
  nlohmann::json j;
  j["n"] = msg.n;
  j["m"] = msg.m;
  j["theta_qft"] = msg.theta_qft;
  j["theta_perm"] = msg.theta_perm;
  j["generator"] = format_bits(msg.generator, msg.n);
  try {
    j["group"] = msg.group().descriptor();
  } catch (const IntegrityError&) {
    j["group"] = nullptr;
  }
  auto& cv = j["coset_values"] = nlohmann::json::array();
  for (const auto& c : msg.coset_values) cv.push_back({format_bits(c.representative, msg.n), c.value});
  return j;
}

CompressedMessage message_from_json(const nlohmann::json& j) {
  try {
    CompressedMessage msg;
    msg.n = j.at("n").get<int>();
    msg.m = j.at("m").get<int>();
    msg.theta_qft = j.at("theta_qft").get<std::vector<std::uint8_t>>();
    msg.theta_perm = j.at("theta_perm").get<std::vector<std::uint8_t>>();
    msg.generator = parse_bits(j.at("generator").get<std::string>());
    for (const auto& rec : j.at("coset_values"))
      msg.coset_values.push_back({parse_bits(rec.at(0).get<std::string>()), rec.at(1).get<std::uint64_t>()});
    return msg;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("malformed message JSON: ") + e.what());
  }
}

}  // namespace hspc

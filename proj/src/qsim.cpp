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

#include "hspc/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "hspc/errors.hpp"

namespace hspc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_wire(const StateVector& s, int q) {
  if (q < 0 || q >= s.num_qubits())
    throw RangeError("qubit " + std::to_string(q) + " out of range for " + std::to_string(s.num_qubits()) + " wires");
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw ParameterError(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 30) throw ShapeError("qubit count must be in [1, 30]");
  amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.dim()) throw RangeError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t d = amplitudes.size();
  if (d < 2 || (d & (d - 1))) throw ShapeError("amplitude count must be a power of two >= 2");
  StateVector s(std::countr_zero(d));
  s.amps_ = std::move(amplitudes);
  return s;
}

double StateVector::norm_squared() const {
  double t = 0.0;
  for (const auto& a : amps_) t += std::norm(a);
  return t;
}

void StateVector::normalize() {
  const double nrm = std::sqrt(norm_squared());
  if (nrm == 0.0) throw InvariantError("cannot normalize the zero vector");
  for (auto& a : amps_) a /= nrm;
}

// ---------------------------------------------------------------------------

void apply_hadamard(StateVector& s, int qubit) {
  check_wire(s, qubit);
  const std::uint64_t b = s.wire_mask(qubit);
  const double r = std::numbers::sqrt2 / 2.0;
  auto& a = s.amplitudes();
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (i & b) continue;
    const Complex x = a[i], y = a[i | b];
    a[i] = r * (x + y);
    a[i | b] = r * (x - y);
  }
}

void apply_controlled_phase_pow(StateVector& s, int control, int target, int k, double gamma) {
  check_wire(s, control);
  check_wire(s, target);
  if (control == target) throw ShapeError("control and target must differ");
  if (k < 1) throw ParameterError("rotation order k must be >= 1");
  check_unit(gamma, "phase switch");
  if (gamma == 0.0) return;
  const std::uint64_t both = s.wire_mask(control) | s.wire_mask(target);
  const Complex ph = std::polar(1.0, kTwoPi * gamma / std::ldexp(1.0, k));
  auto& a = s.amplitudes();
  for (std::uint64_t i = 0; i < a.size(); ++i)
    if ((i & both) == both) a[i] *= ph;
}

void apply_swap_pow(StateVector& s, int q1, int q2, double lam, bool adjoint) {
  check_wire(s, q1);
  check_wire(s, q2);
  if (q1 == q2) throw ShapeError("swap wires must differ");
  check_unit(lam, "swap switch");
  if (lam == 0.0) return;
  const std::uint64_t b1 = s.wire_mask(q1), b2 = s.wire_mask(q2);
  const Complex e = std::polar(1.0, (adjoint ? -1.0 : 1.0) * std::numbers::pi * lam);
  const Complex stay = 0.5 * (1.0 + e), move = 0.5 * (1.0 - e);
  auto& a = s.amplitudes();
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    // Visit each (|..1..0..>, |..0..1..>) pair once from its q1=1 member.
    if (!(i & b1) || (i & b2)) continue;
    const std::uint64_t j = (i ^ b1) | b2;
    const Complex x = a[i], y = a[j];
    a[i] = stay * x + move * y;
    a[j] = move * x + stay * y;
  }
}

// ---------------------------------------------------------------------------

QftParams QftParams::for_group(const GroupType& type) {
  auto theta = qft_theta_for(type);
  return from_theta(theta, type.n());
}

QftParams QftParams::tied(std::vector<double> gamma, int n) {
  if (gamma.size() != theta_count(n)) throw ShapeError("gamma length must be n(n-1)/2");
  QftParams p;
  p.swap_gamma.resize(n - 1);
  for (int k = 0; k + 1 < n; ++k) p.swap_gamma[k] = gamma[theta_index(n, k, k + 1)];
  p.gamma = std::move(gamma);
  return p;
}

QftParams QftParams::from_theta(std::span<const std::uint8_t> theta, int n) {
  return tied(std::vector<double>(theta.begin(), theta.end()), n);
}

PermParams PermParams::identity(int n) { return PermParams{std::vector<double>(theta_count(n), 0.0)}; }

PermParams PermParams::for_perm(const BitPermutation& perm) { return from_theta(perm_theta_for(perm)); }

PermParams PermParams::from_theta(std::span<const std::uint8_t> theta) {
  return PermParams{std::vector<double>(theta.begin(), theta.end())};
}

void apply_qft_theta(StateVector& s, const QftParams& p, int first) {
  const int n = p.n();
  if (p.gamma.size() != theta_count(n)) throw ShapeError("QFT parameter lengths are inconsistent");
  if (first < 0 || first + n > s.num_qubits()) throw ShapeError("QFT register does not fit in the state");
  for (int k = 0; k < n; ++k) {
    apply_hadamard(s, first + k);
    for (int j = k + 1; j < n; ++j)
      apply_controlled_phase_pow(s, first + j, first + k, j - k + 1, p.gamma[theta_index(n, k, j)]);
  }
  // Block-reversal network: the swap of wires (i, i+1) in round t fires
  // when every link L_i ... L_{i+t-1} is on.
  for (int t = n - 1; t >= 1; --t) {
    for (int i = n - t; i >= 1; --i) {
      double sw = 1.0;
      for (int l = i; l <= i + t - 1; ++l) sw *= p.swap_gamma[l - 1];
      apply_swap_pow(s, first + i - 1, first + i, std::clamp(sw, 0.0, 1.0));
    }
  }
}

void apply_w_theta(StateVector& s, const PermParams& p, int n, int first, bool adjoint) {
  if (p.lambda.size() != theta_count(n)) throw ShapeError("permutation parameter length must be n(n-1)/2");
  if (first < 0 || first + n > s.num_qubits()) throw ShapeError("permutation register does not fit in the state");
  struct Gate {
    int i;
    double lam;
  };
  std::vector<Gate> gates;
  std::size_t off = 0;
  for (int t = n - 1; t >= 1; --t) {
    for (int i = 0; i < t; ++i) gates.push_back({i, p.lambda[off + i]});
    off += t;
  }
  if (adjoint) std::reverse(gates.begin(), gates.end());
  for (const auto& g : gates) apply_swap_pow(s, first + g.i, first + g.i + 1, g.lam, adjoint);
}

namespace {
template <class Fn>
Eigen::MatrixXcd matrix_of(int n, Fn&& apply) {
  const std::uint64_t d = std::uint64_t{1} << n;
  Eigen::MatrixXcd u(d, d);
  for (std::uint64_t c = 0; c < d; ++c) {
    auto s = StateVector::basis(n, c);
    apply(s);
    for (std::uint64_t r = 0; r < d; ++r) u(r, c) = s[r];
  }
  return u;
}
}  // namespace

Eigen::MatrixXcd build_qft_theta(const QftParams& p, int n) {
  if (p.n() != n) throw ShapeError("QFT parameters do not match n");
  return matrix_of(n, [&](StateVector& s) { apply_qft_theta(s, p); });
}

Eigen::MatrixXcd build_w_theta(const PermParams& p, int n) {
  return matrix_of(n, [&](StateVector& s) { apply_w_theta(s, p, n); });
}

Eigen::MatrixXcd build_wqft_theta(const QftParams& qft, const PermParams& perm, int n) {
  if (qft.n() != n) throw ShapeError("QFT parameters do not match n");
  return matrix_of(n, [&](StateVector& s) {
    apply_w_theta(s, perm, n);
    apply_qft_theta(s, qft);
    apply_w_theta(s, perm, n, 0, true);
  });
}

Eigen::MatrixXcd group_fourier_matrix(const GroupStructure& g) {
  const std::uint64_t d = g.order();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const double M = static_cast<double>(g.type().modulus());
  Eigen::MatrixXcd u(d, d);
  for (std::uint64_t j = 0; j < d; ++j)
    for (std::uint64_t i = 0; i < d; ++i)
      u(j, i) = std::polar(scale, kTwoPi * static_cast<double>(g.character_phase(j, i)) / M);
  return u;
}

// ---------------------------------------------------------------------------

Oracle::Oracle(int n_, int m_, std::vector<std::uint64_t> table_) : n(n_), m(m_), table(std::move(table_)) {
  if (n < 1 || n > kMaxGroupBits) throw ShapeError("oracle index width must be in [1, 20]");
  if (m < 1 || m > 32) throw ShapeError("oracle value width must be in [1, 32]");
  if (table.size() != (std::size_t{1} << n)) throw ShapeError("oracle table must have exactly 2^n entries");
  for (auto v : table)
    if (v >> m) throw RangeError("oracle value " + std::to_string(v) + " does not fit in m bits");
}

void apply_oracle(const Oracle& f, StateVector& s) {
  if (s.num_qubits() != f.n + f.m) throw ShapeError("state must have n + m qubits for the oracle");
  auto& a = s.amplitudes();
  std::vector<Complex> out(a.size());
  const std::uint64_t ymask = (std::uint64_t{1} << f.m) - 1;
  for (std::uint64_t idx = 0; idx < a.size(); ++idx) {
    const std::uint64_t i = idx >> f.m, y = idx & ymask;
    out[(i << f.m) | (y ^ f.table[i])] = a[idx];
  }
  a.swap(out);
}

std::uint64_t measure_register(StateVector& s, std::span<const int> qubits, Rng& rng) {
  if (qubits.empty()) throw ShapeError("measure_register needs at least one qubit");
  std::vector<std::uint64_t> masks;
  std::uint64_t all = 0;
  for (int q : qubits) {
    check_wire(s, q);
    const std::uint64_t b = s.wire_mask(q);
    if (all & b) throw ShapeError("measured qubits must be distinct");
    all |= b;
    masks.push_back(b);
  }
  auto outcome_of = [&](std::uint64_t idx) {
    std::uint64_t o = 0;
    for (auto b : masks) o = (o << 1) | ((idx & b) ? 1 : 0);
    return o;
  };
  auto& a = s.amplitudes();
  std::vector<double> prob(std::size_t{1} << masks.size(), 0.0);
  for (std::uint64_t idx = 0; idx < a.size(); ++idx) prob[outcome_of(idx)] += std::norm(a[idx]);
  double total = 0.0;
  for (double p : prob) total += p;
  const double u = rng.uniform() * total;
  std::uint64_t pick = prob.size() - 1;
  double acc = 0.0;
  for (std::uint64_t o = 0; o < prob.size(); ++o) {
    acc += prob[o];
    if (u < acc && prob[o] > 0.0) {
      pick = o;
      break;
    }
  }
  while (prob[pick] == 0.0 && pick > 0) --pick;
  const double scale = 1.0 / std::sqrt(prob[pick]);
  for (std::uint64_t idx = 0; idx < a.size(); ++idx) {
    if (outcome_of(idx) == pick)
      a[idx] *= scale;
    else
      a[idx] = 0.0;
  }
  return pick;
}

Element hsp_circuit_sample(const Oracle& f, const QftParams& qft, const PermParams& perm, Rng& rng) {
  if (qft.n() != f.n) throw ShapeError("QFT parameters do not match the oracle index width");
  if (f.n + f.m > kDefaultQubitLimit) throw SizeLimitError("HSP circuit exceeds the qubit limit");
  StateVector s(f.n + f.m);
  for (int q = 0; q < f.n; ++q) apply_hadamard(s, q);
  apply_oracle(f, s);
  std::vector<int> reg1(f.n), reg2(f.m);
  for (int q = 0; q < f.n; ++q) reg1[q] = q;
  for (int q = 0; q < f.m; ++q) reg2[q] = f.n + q;
  measure_register(s, reg2, rng);
  apply_w_theta(s, perm, f.n);
  apply_qft_theta(s, qft);
  apply_w_theta(s, perm, f.n, 0, true);
  return measure_register(s, reg1, rng);
}

namespace {

std::optional<GroupStructure> binary_group(const QftParams& qft, const PermParams& perm) {
  const int n = qft.n();
  auto is_bit = [](double v) { return v == 0.0 || v == 1.0; };
  if (perm.lambda.size() != theta_count(n)) return std::nullopt;
  std::vector<std::uint8_t> tq, tp;
  for (double v : qft.gamma) {
    if (!is_bit(v)) return std::nullopt;
    tq.push_back(static_cast<std::uint8_t>(v));
  }
  for (double v : perm.lambda) {
    if (!is_bit(v)) return std::nullopt;
    tp.push_back(static_cast<std::uint8_t>(v));
  }
  if (QftParams::from_theta(tq, n).swap_gamma != qft.swap_gamma) return std::nullopt;
  return decode_group_from_params(tq, tp);
}

}  // namespace

std::vector<double> exact_output_distribution(const Oracle& f, const QftParams& qft, const PermParams& perm,
                                              int qubit_limit) {
  if (qft.n() != f.n) throw ShapeError("QFT parameters do not match the oracle index width");
  if (f.n + f.m > qubit_limit)
    throw SizeLimitError("HSP circuit needs " + std::to_string(f.n + f.m) + " qubits, limit is " +
                         std::to_string(qubit_limit));
  // After the oracle the value register is classical in effect: each value y
  // contributes an independent branch supported on f^{-1}(y).
  std::map<std::uint64_t, std::vector<Element>> level_sets;
  for (Element i = 0; i < f.table.size(); ++i) level_sets[f.table[i]].push_back(i);
  const double amp = 1.0 / std::sqrt(static_cast<double>(f.table.size()));
  std::vector<double> dist(f.table.size(), 0.0);
  // At binary settings the circuit is a group Fourier transform, so a level
  // set and any translate of it have the same outcome distribution.
  const auto group = binary_group(qft, perm);
  std::map<std::vector<Element>, std::vector<double>> memo;
  for (auto& [y, idx] : level_sets) {
    std::vector<Element> key;
    if (group) {
      const Element shift = group->inverse(idx.front());
      key.reserve(idx.size());
      for (Element i : idx) key.push_back(group->op(i, shift));
      std::sort(key.begin(), key.end());
      if (auto it = memo.find(key); it != memo.end()) {
        for (std::uint64_t j = 0; j < dist.size(); ++j) dist[j] += it->second[j];
        continue;
      }
    }
    StateVector s(f.n);
    s.amplitudes()[0] = 0.0;
    for (Element i : idx) s.amplitudes()[i] = amp;
    apply_w_theta(s, perm, f.n);
    apply_qft_theta(s, qft);
    apply_w_theta(s, perm, f.n, 0, true);
    std::vector<double> branch(dist.size());
    for (std::uint64_t j = 0; j < dist.size(); ++j) {
      branch[j] = std::norm(s[j]);
      dist[j] += branch[j];
    }
    if (group) memo.emplace(std::move(key), std::move(branch));
  }
  return dist;
}

}  // namespace hspc

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
 * Dense statevector simulation of the parametrized QFT / bit-permutation
 * circuits used for hidden-subgroup sampling.
 *
 * Wire q of a k-qubit state corresponds to bit (k - 1 - q) of the amplitude
 * index, so wire 0 is the most significant digit.  For the two-register HSP
 * circuit the first n wires hold the index register and the last m wires
 * the value register, giving amplitude index (i << m) | y.
 */

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hspc/group.hpp"
#include "hspc/rng.hpp"

namespace hspc {

using Complex = std::complex<double>;

inline constexpr int kDefaultQubitLimit = 24;

class StateVector {
 public:
  /// |0...0> on `num_qubits` wires.
  explicit StateVector(int num_qubits);
  static StateVector basis(int num_qubits, std::uint64_t index);
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t dim() const { return amps_.size(); }
  std::vector<Complex>& amplitudes() { return amps_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  Complex operator[](std::uint64_t i) const { return amps_[i]; }

  double norm_squared() const;
  void normalize();
  /// Integer bit that holds wire q.
  std::uint64_t wire_mask(int q) const { return std::uint64_t{1} << (num_qubits_ - 1 - q); }

 private:
  int num_qubits_;
  std::vector<Complex> amps_;
};

// Gates.  All act in place; fractional parameters must lie in [0, 1].

void apply_hadamard(StateVector& s, int qubit);
/// Multiplies the |11> component of (control, target) by exp(2 pi i gamma / 2^k).
void apply_controlled_phase_pow(StateVector& s, int control, int target, int k, double gamma);
/// Principal power SWAP^lam: phase e^{i pi lam} on (|01> - |10>)/sqrt 2.
void apply_swap_pow(StateVector& s, int q1, int q2, double lam, bool adjoint = false);

struct QftParams {
  std::vector<double> gamma;       ///< gamma_{k,j}, k < j, row-major
  std::vector<double> swap_gamma;  ///< link switches of the final swap stage

  /// Binary parameters of the QFT over `type`.
  static QftParams for_group(const GroupType& type);
  /// Swap links tied to the nearest-neighbour phase switches gamma_{k,k+1}.
  static QftParams tied(std::vector<double> gamma, int n);
  static QftParams from_theta(std::span<const std::uint8_t> theta, int n);

  int n() const { return static_cast<int>(swap_gamma.size()) + 1; }
};

struct PermParams {
  std::vector<double> lambda;  ///< layers lambda_(n-1), ..., lambda_(1)

  static PermParams identity(int n);
  static PermParams for_perm(const BitPermutation& perm);
  static PermParams from_theta(std::span<const std::uint8_t> theta);
};

/// QFT_theta on wires first, ..., first + n - 1.
void apply_qft_theta(StateVector& s, const QftParams& p, int first = 0);
/// Bubble network W_theta (or its adjoint) on wires first, ..., first + n - 1.
void apply_w_theta(StateVector& s, const PermParams& p, int n, int first = 0, bool adjoint = false);

/// Matrix of QFT_theta on n wires (column c = image of basis state c).
Eigen::MatrixXcd build_qft_theta(const QftParams& p, int n);
Eigen::MatrixXcd build_w_theta(const PermParams& p, int n);
/// W^dagger QFT_theta W, the transform actually measured in the HSP circuit.
Eigen::MatrixXcd build_wqft_theta(const QftParams& qft, const PermParams& perm, int n);
/// Tensor product of DFTs over the factors of `g`, conjugated by its bit permutation.
Eigen::MatrixXcd group_fourier_matrix(const GroupStructure& g);

struct Oracle {
  int n = 0;
  int m = 0;
  std::vector<std::uint64_t> table;

  Oracle() = default;
  Oracle(int n, int m, std::vector<std::uint64_t> table);
  std::uint64_t operator()(Element i) const { return table[i]; }
};

/// |i>|y> -> |i>|y xor f(i)>.
void apply_oracle(const Oracle& f, StateVector& s);

/// Samples the listed wires (first listed wire = most significant outcome
/// bit) and collapses `s` onto the observed outcome.
std::uint64_t measure_register(StateVector& s, std::span<const int> qubits, Rng& rng);

/// One literal shot of H^n, U_f, measure value register, W, QFT_theta, W^dagger,
/// measure index register.
Element hsp_circuit_sample(const Oracle& f, const QftParams& qft, const PermParams& perm, Rng& rng);

/// Exact Born distribution of the index-register outcome, indexed by j.
std::vector<double> exact_output_distribution(const Oracle& f, const QftParams& qft,
                                              const PermParams& perm,
                                              int qubit_limit = kDefaultQubitLimit);

}  // namespace hspc

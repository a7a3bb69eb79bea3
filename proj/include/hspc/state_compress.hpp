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
 * Compression of quantum states that are invariant under translations by a
 * hidden subgroup: coset states, the encoding / decoding channels, learning
 * the translation step over Z_{2^n}, and variational learning of (G, H)
 * from copies of the states.
 */

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hspc/group.hpp"
#include "hspc/qsim.hpp"
#include "hspc/rng.hpp"
#include "hspc/var_hsp.hpp"

namespace hspc {

/// Coset states |c + H> = |H|^{-1/2} sum_{h in H} |c * h>, one per coset.
class CosetBasis {
 public:
  CosetBasis(GroupStructure group, Subgroup hidden);

  const GroupStructure& group() const { return group_; }
  const Subgroup& hidden() const { return hidden_; }
  const std::vector<Element>& representatives() const { return reps_; }
  /// 2^n x |G/H| isometry whose columns are the coset states.
  const Eigen::MatrixXcd& isometry() const { return v_; }
  std::size_t size() const { return reps_.size(); }
  StateVector vector(std::size_t k) const;

 private:
  GroupStructure group_;
  Subgroup hidden_;
  std::vector<Element> reps_;
  Eigen::MatrixXcd v_;
};

inline constexpr int kMaxDensityBits = 10;

/// Dense density operator.  Channel outputs may have trace below one when
/// the input has weight outside the invariant subspace; is_state() checks
/// the full set of density-operator conditions.
class DensityOp {
 public:
  DensityOp() = default;
  explicit DensityOp(Eigen::MatrixXcd m);
  static DensityOp pure(const StateVector& psi);
  static DensityOp maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  /// Hermitian, unit trace and positive semidefinite within `tol`.
  bool is_state(double tol = 1e-9) const;

 private:
  Eigen::MatrixXcd m_;
};

/// x -> x * h0 as an index map.
std::vector<Element> translation_map(const GroupStructure& g, Element h0);
/// Permutation matrix of T_{h0}.
Eigen::MatrixXcd translation_op(const GroupStructure& g, Element h0);
void apply_translation(const GroupStructure& g, Element h0, StateVector& psi);

/// sum_c alpha_c |c + H> with alpha uniform on the unit sphere of C^{|G/H|}.
StateVector random_invariant_state(const CosetBasis& basis, Rng& rng);

/// (E rho)_{ij} = <c_i + H| rho |c_j + H>.
DensityOp encode_state(const DensityOp& rho, const CosetBasis& basis);
/// Embeds a |G/H|-dimensional operator back into the 2^n-dimensional space.
DensityOp decode_state(const DensityOp& small, const CosetBasis& basis);

using StateSource = std::function<StateVector(Rng&)>;

/// Random invariant states for (G, H).
StateSource invariant_state_source(const CosetBasis& basis);

struct LearnH0Result {
  std::uint64_t h0 = 0;         ///< 2^n / gcd, so h0 = 2^n means H is trivial
  std::uint64_t sample_gcd = 0;  ///< 2^n when every sample was 0
  bool inconclusive = false;     ///< all samples were zero
  std::vector<std::uint64_t> samples;
};

/// QFT over Z_{2^n} on K fresh copies, measure, and take the gcd of the
/// outcomes.  Outcomes are multiples of 2^n / h0, so h0 = 2^n / gcd.
LearnH0Result learn_h0_zn(const StateSource& source, int n, int K, Rng& rng);

/// Outcome distribution of W^dagger QFT_theta W averaged over `states`.
std::vector<double> state_fourier_distribution(const std::vector<StateVector>& states, const BinaryConfig& cfg);

/// 1 - mean <psi| D(E(|psi><psi|)) |psi> for the channels of (G, H).
double infidelity_cost(const std::vector<StateVector>& states, const GroupStructure& g, const Subgroup& h);
/// Infidelity for an encoder run at binary parameters sampled from `params`.
double infidelity_cost(const std::vector<StateVector>& states, const RealParams& params, std::span<const double> S,
                       const TrainConfig& config, Rng& rng);

struct StateTrainConfig {
  TrainConfig train;
  int copies = 8;  ///< states drawn from the source for the cost estimate
};

struct StateTrainResult {
  RealParams params;
  BinaryConfig config;
  GroupStructure group{GroupType::cyclic(1)};
  Subgroup hidden{GroupStructure(GroupType::cyclic(1)), {0}};
  std::vector<HistoryRow> history;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

StateTrainResult variational_state_train(const StateSource& source, int n, const StateTrainConfig& config, Rng& rng);

}  // namespace hspc

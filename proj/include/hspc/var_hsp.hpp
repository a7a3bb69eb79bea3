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
 * Variational hidden-subgroup compression: Bernoulli relaxation of the
 * circuit switches, pretraining of the generator switches, the encoder and
 * decoder pair, and a finite-difference training loop over the relaxed
 * switch probabilities.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hspc/group.hpp"
#include "hspc/message.hpp"
#include "hspc/qsim.hpp"
#include "hspc/rng.hpp"

namespace hspc {

/// Switch probabilities gamma in [0, 1] for the QFT and permutation networks.
struct RealParams {
  std::vector<double> gamma_qft;
  std::vector<double> gamma_perm;

  static RealParams constant(int n, double qft, double perm = 0.0);
  /// Binary values realising `g` exactly.
  static RealParams exact(const GroupStructure& g);
  int n() const;
};

struct TrainConfig {
  double learning_rate = 0.1;  ///< beta
  double fd_step = 0.05;       ///< h
  int mc_samples = 50;         ///< T
  int max_iters = 500;
  double grad_tol = 1e-3;  ///< epsilon
  int resample_limit = 1000;
  std::uint64_t seed = 0;
  bool train_perm = false;
  /// Consecutive small-gradient iterations required to stop while the
  /// estimated cost is still positive.
  int patience = 10;
  /// Largest Euclidean length of one update of the raw parameters (0 = no cap).
  double max_step = 0.25;

  double pretrain_lr = 0.05;
  double pretrain_fd_step = 1e-3;
  int pretrain_iters = 200;
  int pretrain_restarts = 32;

  /// Starting point for gamma; uniform random when empty.
  std::optional<RealParams> init;

  void validate() const;
};

struct BinaryConfig {
  std::vector<std::uint8_t> theta_qft;
  std::vector<std::uint8_t> theta_perm;
  int draws = 1;          ///< Bernoulli rounds used, including the accepted one
  bool fallback = false;  ///< drawn from the exact conditional after the limit

  GroupStructure group() const;
  std::string key() const;
  /// Stable 64-bit hash of key(), used to key per-configuration random streams.
  std::uint64_t fingerprint() const;
  int n() const;
};

/// Bernoulli draws Pr(theta_i = 1) = gamma_i, rejected until the QFT switches
/// form a block pattern.  After `resample_limit` rejections the pattern is
/// drawn from the exact conditional distribution over valid patterns.
BinaryConfig sample_binary_config(const RealParams& params, Rng& rng, int resample_limit);
/// Most probable valid QFT pattern with permutation switches rounded at 1/2.
BinaryConfig nearest_valid_config(const RealParams& params);
/// Probability of each group type under the Bernoulli product, conditioned on validity.
std::vector<std::pair<GroupType, double>> valid_pattern_distribution(std::span<const double> gamma_qft, int n);

/// Continuous block values s_(t) = sum_p S_{pi(p)} 2^{end(t) - p}.
std::vector<double> continuous_generator(std::span<const double> S, const GroupStructure& g);
std::vector<double> continuous_generator(std::span<const double> S, const GroupType& type);
/// Nearest-integer rounding of every block value, as a group element.
Element round_generator(std::span<const double> S, const GroupStructure& g);

/// Discrepancy of the congruence chi_j(s) = 1 for continuous block values s.
double congruence_residual(const GroupStructure& g, Element j, std::span<const double> blocks);
/// C_E = sum_j P(j) C_L(s) + sum_i sin^2(pi S_i).
double pretrain_cost(std::span<const double> dist, std::span<const double> S, const GroupStructure& g);
double pretrain_cost(std::span<const double> dist, std::span<const double> S, const GroupType& type);

struct PretrainResult {
  std::vector<double> S;
  Element generator = 0;
  double cost = 0.0;  ///< C_E at the final S
  int iterations = 0;
  int restarts = 0;
  bool consistent = false;  ///< generator satisfies every congruence of the support
};

/// Gradient descent of C_E over S from S0, restarting from random S on
/// failure.  With `require_nontrivial` the generator is never 0; otherwise
/// the trivial generator is returned when no consistent nonzero one is found.
PretrainResult pretrain(std::span<const double> dist, const GroupStructure& g, std::span<const double> S0,
                        const TrainConfig& config, Rng& rng, bool require_nontrivial);

struct EncodeResult {
  CompressedMessage message;
  BinaryConfig config;
  PretrainResult pretrain;
  std::uint64_t value_queries = 0;  ///< one per coset
  bool converged = false;
};

/// Encoder for a fixed binary configuration.
EncodeResult encode_with_config(const Oracle& f, const BinaryConfig& cfg, std::span<const double> S,
                                const TrainConfig& config, Rng& rng, bool require_nontrivial = false);
/// Encoder: samples a binary configuration from `params`, then encodes.
EncodeResult encode(const Oracle& f, const RealParams& params, std::span<const double> S, const TrainConfig& config,
                    Rng& rng, bool require_nontrivial = false);

/// sum_i (a_i - b_i)^2.
double reconstruction_cost(std::span<const std::uint64_t> original, std::span<const std::uint64_t> reconstructed);

/// Monte Carlo average of the reconstruction cost over config.mc_samples
/// encoder passes with freshly sampled binary configurations.
double expected_cost(const Oracle& f, const RealParams& params, std::span<const double> S, const TrainConfig& config,
                     Rng& rng);

/// Central differences with probes kept inside [lo, hi] (one-sided at the bounds).
std::vector<double> finite_diff_gradient(const std::function<double(std::span<const double>)>& fn,
                                         std::span<const double> x, double h, double lo = 0.0, double hi = 1.0);

// ---------------------------------------------------------------------------
// Generic training over relaxed switches.

struct HistoryRow {
  int iteration = 0;
  double expected_cost = 0.0;
  double grad_norm = 0.0;
};

/// Cost of one binary configuration.  Must be deterministic and thread-safe.
using ConfigCostFn = std::function<double(const BinaryConfig&)>;

struct SwitchTrainResult {
  RealParams params;  ///< gamma with the lowest estimated expected cost
  BinaryConfig config;
  double final_cost = 0.0;  ///< cost of `config`
  double initial_cost = 0.0;
  std::vector<HistoryRow> history;  ///< last row is the cost after rounding
  int iterations = 0;
  bool converged = false;
};

/// Finds switch probabilities minimising the expected configuration cost:
/// gamma = sin^2(x), x <- x - beta dE/dx, stopping when |dE/dx| < epsilon or
/// after max_iters.  The result is rounded to a valid binary configuration;
/// the best configuration sampled during training is kept if it is cheaper.
SwitchTrainResult train_switches(int n, const ConfigCostFn& cost, const TrainConfig& config, Rng& rng);

struct TrainResult {
  RealParams params;
  CompressedMessage message;
  std::vector<HistoryRow> history;
  double final_cost = 0.0;
  double initial_cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Variational compression of one sequence.
TrainResult train(const Oracle& f, const TrainConfig& config, Rng& rng);

/// Reconstruction cost of encoding `f` with a fixed trained configuration.
double evaluate_config(const Oracle& f, const BinaryConfig& cfg, const TrainConfig& config);

}  // namespace hspc

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

#include "hspc/state_compress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hspc/errors.hpp"

namespace hspc {

namespace {

void check_density_bits(int n) {
  if (n > kMaxDensityBits) throw SizeLimitError("dense state compression is limited to n <= 10");
}

Eigen::VectorXcd as_eigen(const StateVector& psi) {
  Eigen::VectorXcd v(psi.dim());
  for (std::uint64_t i = 0; i < psi.dim(); ++i) v(i) = psi[i];
  return v;
}

}  // namespace

CosetBasis::CosetBasis(GroupStructure group, Subgroup hidden)
    : group_(std::move(group)), hidden_(std::move(hidden)), reps_(cosets(group_, hidden_)) {
  check_density_bits(group_.n());
  const double amp = 1.0 / std::sqrt(static_cast<double>(hidden_.size()));
  v_ = Eigen::MatrixXcd::Zero(group_.order(), reps_.size());
  for (std::size_t k = 0; k < reps_.size(); ++k)
    for (Element h : hidden_.elements()) v_(group_.op(reps_[k], h), k) = amp;
}

StateVector CosetBasis::vector(std::size_t k) const {
  if (k >= reps_.size()) throw RangeError("coset index out of range");
  std::vector<Complex> a(group_.order());
  for (std::uint64_t i = 0; i < a.size(); ++i) a[i] = v_(i, k);
  return StateVector::from_amplitudes(std::move(a));
}

DensityOp::DensityOp(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw ShapeError("density operator must be square and nonempty");
}

DensityOp DensityOp::pure(const StateVector& psi) {
  const auto v = as_eigen(psi);
  return DensityOp(v * v.adjoint());
}

DensityOp DensityOp::maximally_mixed(std::size_t dim) {
  return DensityOp(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

bool DensityOp::is_state(double tol) const {
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(m_.trace() - Complex(1.0, 0.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

std::vector<Element> translation_map(const GroupStructure& g, Element h0) {
  if (h0 >= g.order()) throw RangeError("translation element outside the group");
  std::vector<Element> map(g.order());
  for (Element x = 0; x < g.order(); ++x) map[x] = g.op(x, h0);
  return map;
}

Eigen::MatrixXcd translation_op(const GroupStructure& g, Element h0) {
  check_density_bits(g.n());
  const auto map = translation_map(g, h0);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(g.order(), g.order());
  for (Element x = 0; x < g.order(); ++x) t(map[x], x) = 1.0;
  return t;
}

void apply_translation(const GroupStructure& g, Element h0, StateVector& psi) {
  if (psi.dim() != g.order()) throw ShapeError("state dimension does not match the group");
  const auto map = translation_map(g, h0);
  std::vector<Complex> out(psi.dim());
  for (Element x = 0; x < psi.dim(); ++x) out[map[x]] = psi[x];
  psi.amplitudes().swap(out);
}

StateVector random_invariant_state(const CosetBasis& basis, Rng& rng) {
  Eigen::VectorXcd alpha(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) alpha(k) = Complex(rng.normal(), rng.normal());
  alpha.normalize();
  const Eigen::VectorXcd psi = basis.isometry() * alpha;
  return StateVector::from_amplitudes(std::vector<Complex>(psi.data(), psi.data() + psi.size()));
}

DensityOp encode_state(const DensityOp& rho, const CosetBasis& basis) {
  if (rho.dim() != basis.group().order()) throw ShapeError("input dimension must be 2^n");
  const auto& v = basis.isometry();
  return DensityOp(v.adjoint() * rho.matrix() * v);
}

DensityOp decode_state(const DensityOp& small, const CosetBasis& basis) {
  if (small.dim() != basis.size()) throw ShapeError("compressed dimension must equal the number of cosets");
  const auto& v = basis.isometry();
  return DensityOp(v * small.matrix() * v.adjoint());
}

StateSource invariant_state_source(const CosetBasis& basis) {
  return [basis](Rng& rng) { return random_invariant_state(basis, rng); };
}

LearnH0Result learn_h0_zn(const StateSource& source, int n, int K, Rng& rng) {
  if (K < 1) throw ParameterError("K must be at least 1");
  const std::uint64_t N = std::uint64_t{1} << n;
  const auto qft = QftParams::for_group(GroupType::cyclic(n));
  std::vector<int> wires(n);
  std::iota(wires.begin(), wires.end(), 0);
  LearnH0Result res;
  std::uint64_t g = 0;
  for (int k = 0; k < K; ++k) {
    StateVector psi = source(rng);
    if (psi.num_qubits() != n) throw ShapeError("source state has the wrong number of qubits");
    apply_qft_theta(psi, qft);
    const std::uint64_t j = measure_register(psi, wires, rng);
    res.samples.push_back(j);
    g = std::gcd(g, j);
  }
  res.inconclusive = g == 0;
  res.sample_gcd = g == 0 ? N : g;
  res.h0 = N / res.sample_gcd;
  return res;
}

std::vector<double> state_fourier_distribution(const std::vector<StateVector>& states, const BinaryConfig& cfg) {
  if (states.empty()) throw ShapeError("need at least one state");
  const int n = cfg.n();
  const auto qft = QftParams::from_theta(cfg.theta_qft, n);
  const auto perm = PermParams::from_theta(cfg.theta_perm);
  std::vector<double> dist(std::size_t{1} << n, 0.0);
  for (StateVector psi : states) {
    if (psi.num_qubits() != n) throw ShapeError("state has the wrong number of qubits");
    apply_w_theta(psi, perm, n);
    apply_qft_theta(psi, qft);
    apply_w_theta(psi, perm, n, 0, true);
    for (std::uint64_t j = 0; j < dist.size(); ++j) dist[j] += std::norm(psi[j]) / static_cast<double>(states.size());
  }
  return dist;
}

double infidelity_cost(const std::vector<StateVector>& states, const GroupStructure& g, const Subgroup& h) {
  if (states.empty()) throw ShapeError("need at least one state");
  const CosetBasis basis(g, h);
  const auto& v = basis.isometry();
  double fid = 0.0;
  for (const auto& psi : states) {
    if (psi.dim() != g.order()) throw ShapeError("state dimension does not match the group");
    if (std::abs(psi.norm_squared() - 1.0) > 1e-9) throw ShapeError("states must have unit norm");
    // E(|psi><psi|) = |phi><phi| with phi = V^dagger psi, and
    // <psi| V |phi><phi| V^dagger |psi> = |phi|^4.
    const Eigen::VectorXcd phi = v.adjoint() * as_eigen(psi);
    const double w = phi.squaredNorm();
    fid += w * w;
  }
  return std::clamp(1.0 - fid / static_cast<double>(states.size()), 0.0, 1.0);
}

namespace {

struct StateCost {
  const std::vector<StateVector>& states;
  const TrainConfig& config;
  std::vector<double> S0;

  Subgroup hidden_at(const BinaryConfig& cfg, const GroupStructure& g) const {
    Rng r = Rng::stream({config.seed, 0x57a7e, cfg.fingerprint()});
    const auto dist = state_fourier_distribution(states, cfg);
    const auto pr = pretrain(dist, g, S0, config, r, true);
    return subgroup_generated(g, pr.generator);
  }
  double operator()(const BinaryConfig& cfg) const {
    const auto g = cfg.group();
    return infidelity_cost(states, g, hidden_at(cfg, g));
  }
};

}  // namespace

double infidelity_cost(const std::vector<StateVector>& states, const RealParams& params, std::span<const double> S,
                       const TrainConfig& config, Rng& rng) {
  const auto cfg = sample_binary_config(params, rng, config.resample_limit);
  const auto g = cfg.group();
  const auto dist = state_fourier_distribution(states, cfg);
  const auto pr = pretrain(dist, g, S, config, rng, true);
  return infidelity_cost(states, g, subgroup_generated(g, pr.generator));
}

StateTrainResult variational_state_train(const StateSource& source, int n, const StateTrainConfig& config, Rng& rng) {
  config.train.validate();
  if (config.copies < 1) throw ParameterError("copies must be at least 1");
  check_density_bits(n);
  std::vector<StateVector> states;
  for (int k = 0; k < config.copies; ++k) {
    states.push_back(source(rng));
    if (states.back().num_qubits() != n) throw ShapeError("source state has the wrong number of qubits");
  }
  std::vector<double> S0(n);
  for (auto& v : S0) v = rng.uniform();
  StateCost sc{states, config.train, S0};
  auto sw = train_switches(n, std::cref(sc), config.train, rng);
  StateTrainResult res;
  res.params = sw.params;
  res.config = sw.config;
  res.group = sw.config.group();
  res.hidden = sc.hidden_at(sw.config, res.group);
  res.history = std::move(sw.history);
  res.final_cost = sw.final_cost;
  res.iterations = sw.iterations;
  res.converged = sw.converged;
  return res;
}

}  // namespace hspc

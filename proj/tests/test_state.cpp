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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <numeric>

#include "hspc/compress_db.hpp"
#include "hspc/errors.hpp"
#include "hspc/hsp_exact.hpp"
#include "hspc/state_compress.hpp"
#include "reference.hpp"

namespace hspc {
namespace {

constexpr double kTol = 1e-9;

Eigen::VectorXcd vec(const StateVector& psi) {
  Eigen::VectorXcd v(psi.dim());
  for (std::uint64_t i = 0; i < psi.dim(); ++i) v(i) = psi[i];
  return v;
}

double trace_norm(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues().cwiseAbs().sum();
}

TEST(Translation, Examples) {
  const GroupStructure z8(GroupType::cyclic(3));
  EXPECT_LT((translation_op(z8, 0) - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff(), kTol);
  const auto map = translation_map(z8, 4);
  for (Element x = 0; x < 8; ++x) EXPECT_EQ(map[x], (x + 4) % 8);
  const auto t = translation_op(z8, 4);
  for (Element x = 0; x < 8; ++x) EXPECT_EQ(t((x + 4) % 8, x), Complex(1.0));
  EXPECT_THROW(translation_map(z8, 8), RangeError);
  StateVector wrong(2);
  EXPECT_THROW(apply_translation(z8, 1, wrong), ShapeError);
}

TEST(Translation, OrderDividesGroup) {
  for (const auto& t : GroupType::all(4)) {
    const GroupStructure g(t);
    for (Element h0 = 0; h0 < g.order(); ++h0) {
      const auto map = translation_map(g, h0);
      Element x = 0;
      std::uint64_t ord = 0;
      do {
        x = map[x];
        ++ord;
      } while (x != 0);
      EXPECT_EQ(g.order() % ord, 0u);
      EXPECT_EQ(ord, subgroup_generated(g, h0).size());
    }
  }
}

TEST(CosetBasis, OrthonormalAndInvariant) {
  for (int n = 1; n <= 6; ++n)
    for (const auto& t : GroupType::all(n)) {
      const GroupStructure g(t);
      const auto subs = n <= 4 ? all_subgroups(g) : std::vector<Subgroup>{subgroup_generated(g, Element{1}),
                                                                          subgroup_generated(g, g.order() / 2)};
      for (const auto& h : subs) {
        const CosetBasis b(g, h);
        ASSERT_EQ(b.size(), g.order() / h.size());
        const auto& v = b.isometry();
        ASSERT_EQ(v.rows(), static_cast<long>(g.order()));
        const Eigen::MatrixXcd gram = v.adjoint() * v;
        ASSERT_LT((gram - Eigen::MatrixXcd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff(), kTol);
        if (n <= 4) {
          for (Element h0 : h.elements())
            ASSERT_LT((translation_op(g, h0) * v - v).cwiseAbs().maxCoeff(), kTol);
        }
      }
    }
}

TEST(CosetBasis, CompressedDimension) {
  for (int n = 1; n <= 8; ++n) {
    const GroupStructure g(GroupType::cyclic(n));
    for (int m = 0; m <= n; ++m) {
      const auto h = subgroup_generated(g, m == 0 ? Element{0} : Element{1} << (n - m));
      ASSERT_EQ(h.size(), std::uint64_t{1} << m);
      EXPECT_EQ(CosetBasis(g, h).size(), std::size_t{1} << (n - m));
    }
  }
}

TEST(InvariantState, Examples) {
  Rng rng(1);
  const GroupStructure g(GroupType({2, 1}));
  const CosetBasis whole(g, whole_group(g));
  const auto u = random_invariant_state(whole, rng);
  for (Element i = 0; i < 8; ++i) EXPECT_NEAR(std::norm(u[i]), 1.0 / 8, kTol);
  for (int n = 2; n <= 5; ++n)
    for (const auto& t : GroupType::all(n)) {
      const GroupStructure gg(t);
      const auto h = subgroup_generated(gg, rng.below(gg.order()));
      const CosetBasis b(gg, h);
      for (int k = 0; k < 5; ++k) {
        const auto psi = random_invariant_state(b, rng);
        EXPECT_NEAR(psi.norm_squared(), 1.0, kTol);
        for (Element h0 : h.elements()) {
          auto moved = psi;
          apply_translation(gg, h0, moved);
          EXPECT_LT((vec(moved) - vec(psi)).norm(), kTol);
        }
      }
    }
}

TEST(Channels, Examples) {
  const GroupStructure z8(GroupType::cyclic(3));
  const CosetBasis b(z8, subgroup_generated(z8, Element{4}));
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto small = encode_state(DensityOp::pure(b.vector(k)), b);
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(b.size(), b.size());
    expect(k, k) = 1.0;
    EXPECT_LT((small.matrix() - expect).cwiseAbs().maxCoeff(), kTol);
    const auto big = decode_state(DensityOp(expect), b);
    EXPECT_LT((big.matrix() - DensityOp::pure(b.vector(k)).matrix()).cwiseAbs().maxCoeff(), kTol);
  }
  const DensityOp mixed(b.isometry() * b.isometry().adjoint() / static_cast<double>(b.size()));
  const auto small = encode_state(mixed, b);
  EXPECT_LT((small.matrix() - DensityOp::maximally_mixed(b.size()).matrix()).cwiseAbs().maxCoeff(), kTol);

  // (|0> - |4>)/sqrt2 is orthogonal to every coset state of {0, 4}.
  std::vector<Complex> a(8, 0.0);
  a[0] = 1.0 / std::sqrt(2.0);
  a[4] = -1.0 / std::sqrt(2.0);
  const auto lost = encode_state(DensityOp::pure(StateVector::from_amplitudes(a)), b);
  EXPECT_LT(lost.matrix().cwiseAbs().maxCoeff(), kTol);
  EXPECT_NEAR(lost.trace(), 0.0, kTol);
  EXPECT_FALSE(lost.is_state());

  EXPECT_THROW(encode_state(DensityOp::maximally_mixed(4), b), ShapeError);
  EXPECT_THROW(decode_state(DensityOp::maximally_mixed(8), b), ShapeError);
  EXPECT_THROW(CosetBasis(z8, subgroup_generated(z8, Element{4})).vector(4), RangeError);
}

TEST(Channels, RoundTripFixesInvariantStates) {
  Rng rng(2);
  for (int n = 1; n <= 6; ++n)
    for (const auto& t : GroupType::all(n)) {
      const GroupStructure g(t);
      const auto h = subgroup_generated(g, rng.below(g.order()));
      const CosetBasis b(g, h);
      // Random mixture of invariant pure states.
      Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(g.order(), g.order());
      double wsum = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double w = rng.uniform() + 0.1;
        const auto v = vec(random_invariant_state(b, rng));
        rho += w * v * v.adjoint();
        wsum += w;
      }
      const DensityOp in(rho / wsum);
      ASSERT_TRUE(in.is_state());
      const auto small = encode_state(in, b);
      ASSERT_TRUE(small.is_state());
      ASSERT_EQ(small.dim(), b.size());
      const auto out = decode_state(small, b);
      ASSERT_NEAR(out.trace(), 1.0, kTol);
      ASSERT_LE(trace_norm(out.matrix() - in.matrix()), kTol);
      const auto psi = random_invariant_state(b, rng);
      const auto rt = decode_state(encode_state(DensityOp::pure(psi), b), b);
      const auto v = vec(psi);
      ASSERT_NEAR((v.adjoint() * rt.matrix() * v)(0, 0).real(), 1.0, kTol);
    }
}

TEST(Channels, EncoderIsCptpOnInvariantSubspace) {
  Rng rng(3);
  for (const auto& t : GroupType::all(4)) {
    const GroupStructure g(t);
    for (const auto& h : all_subgroups(g)) {
      const CosetBasis b(g, h);
      const std::size_t d = b.size();
      const auto& v = b.isometry();
      // Choi matrix sum_kl |k><l| (x) E(|v_k><v_l|).
      Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(d * d, d * d);
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          const Eigen::MatrixXcd in = v.col(k) * v.col(l).adjoint();
          const Eigen::MatrixXcd out = v.adjoint() * in * v;
          choi.block(k * d, l * d, d, d) = out;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(choi);
      ASSERT_GE(es.eigenvalues().minCoeff(), -kTol);
      // Trace preservation: tracing out the output leaves the identity.
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          ASSERT_NEAR(std::abs(choi.block(k * d, l * d, d, d).trace() - Complex(k == l ? 1.0 : 0.0)), 0.0, kTol);
    }
  }
}

TEST(Density, Validation) {
  EXPECT_THROW(DensityOp(Eigen::MatrixXcd(2, 3)), ShapeError);
  EXPECT_TRUE(DensityOp::maximally_mixed(4).is_state());
  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_FALSE(DensityOp(neg).is_state());
}

TEST(CosetFourier, SupportIsOrthogonalGroup) {
  Rng rng(4);
  for (int n = 1; n <= 4; ++n)
    for (const auto& t : GroupType::all(n))
      for (const auto& p : ref::all_permutations(n)) {
        const GroupStructure g(t, BitPermutation(p));
        const ref::Group r(g);
        const RealParams exact = RealParams::exact(g);
        const auto cfg = nearest_valid_config(exact);
        for (const auto& h : all_subgroups(g)) {
          const CosetBasis b(g, h);
          const auto perp = r.orthogonal(h.elements());
          const auto dist = state_fourier_distribution({b.vector(rng.below(b.size()))}, cfg);
          for (Element j = 0; j < g.order(); ++j) {
            const bool in = std::binary_search(perp.begin(), perp.end(), j);
            ASSERT_NEAR(dist[j], in ? 1.0 / perp.size() : 0.0, kTol) << g.descriptor();
          }
        }
      }
}

TEST(LearnH0, Z16PeriodFour) {
  const GroupStructure z16(GroupType::cyclic(4));
  const CosetBasis b(z16, subgroup_generated(z16, Element{4}));
  Rng rng(5);
  int hits = 0, hits_fixed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = learn_h0_zn(invariant_state_source(b), 4, 8, rng);
    for (auto j : r.samples) ASSERT_EQ(j % 4, 0u);
    hits += r.h0 == 4;
    const auto fixed = b.vector(1);
    const auto rf = learn_h0_zn([&](Rng&) { return fixed; }, 4, 8, rng);
    hits_fixed += rf.h0 == 4;
  }
  EXPECT_GE(hits, 190);
  EXPECT_GE(hits_fixed, 190);
}

TEST(LearnH0, ReturnsSubgroupStep) {
  Rng rng(6);
  for (int n = 2; n <= 8; ++n) {
    const GroupStructure g(GroupType::cyclic(n));
    for (int m = 1; m < n; ++m) {
      const Element h0 = Element{1} << m;
      const CosetBasis b(g, subgroup_generated(g, h0));
      int hits = 0;
      for (int trial = 0; trial < 40; ++trial) hits += learn_h0_zn(invariant_state_source(b), n, 8, rng).h0 == h0;
      EXPECT_GE(hits, 38) << n << " " << m;
    }
  }
}

TEST(LearnH0, DegenerateCases) {
  Rng rng(7);
  const GroupStructure g(GroupType::cyclic(3));
  const CosetBasis whole(g, whole_group(g));
  const auto r = learn_h0_zn(invariant_state_source(whole), 3, 5, rng);
  EXPECT_TRUE(r.inconclusive);
  EXPECT_EQ(r.sample_gcd, 8u);
  EXPECT_EQ(r.h0, 1u);
  const CosetBasis trivial(g, subgroup_generated(g, Element{0}));
  int gcd_one = 0;
  for (int k = 0; k < 50; ++k) gcd_one += learn_h0_zn(invariant_state_source(trivial), 3, 8, rng).h0 == 8;
  EXPECT_GE(gcd_one, 45);
  EXPECT_THROW(learn_h0_zn(invariant_state_source(trivial), 3, 0, rng), ParameterError);
  EXPECT_THROW(learn_h0_zn(invariant_state_source(trivial), 4, 1, rng), ShapeError);
}

TEST(Infidelity, Examples) {
  Rng rng(8);
  const GroupStructure z8(GroupType::cyclic(3));
  const auto h = subgroup_generated(z8, Element{4});
  const CosetBasis b(z8, h);
  std::vector<StateVector> states;
  for (int k = 0; k < 6; ++k) states.push_back(random_invariant_state(b, rng));
  EXPECT_NEAR(infidelity_cost(states, z8, h), 0.0, kTol);
  const double bigger = infidelity_cost(states, z8, subgroup_generated(z8, Element{2}));
  EXPECT_GT(bigger, 1e-3);
  EXPECT_LE(bigger, 1.0);
  EXPECT_NEAR(infidelity_cost(states, z8, subgroup_generated(z8, Element{0})), 0.0, kTol);

  TrainConfig cfg;
  EXPECT_NEAR(infidelity_cost(states, RealParams::exact(z8), std::vector<double>{1, 0, 0}, cfg, rng), 0.0, kTol);
  for (int k = 0; k < 20; ++k) {
    std::vector<StateVector> any;
    for (int c = 0; c < 3; ++c) {
      std::vector<Complex> a(8);
      for (auto& z : a) z = Complex(rng.normal(), rng.normal());
      auto s = StateVector::from_amplitudes(a);
      s.normalize();
      any.push_back(s);
    }
    const double c = infidelity_cost(any, RealParams::constant(3, rng.uniform()), std::vector<double>(3, 0.5), cfg, rng);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
  EXPECT_THROW(infidelity_cost({}, z8, h), ShapeError);
  EXPECT_THROW(infidelity_cost({StateVector::from_amplitudes(std::vector<Complex>(8, 1.0))}, z8, h), ShapeError);
}

TEST(StateTrain, Z8PeriodFour) {
  const GroupStructure z8(GroupType::cyclic(3));
  const auto h = subgroup_generated(z8, Element{4});
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    StateTrainConfig cfg;
    cfg.train.seed = seed;
    cfg.train.mc_samples = 20;
    cfg.train.max_iters = 100;
    Rng rng(seed);
    const auto r = variational_state_train(invariant_state_source(CosetBasis(z8, h)), 3, cfg, rng);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.final_cost, 1e-6);
    // {0, 4} is also the subgroup generated by 100 under xor, so the
    // learned structure only needs to hide the same set.
    EXPECT_EQ(r.hidden.elements(), h.elements());
  }
}

TEST(StateTrain, SimonSymmetricStates) {
  const GroupStructure s3(GroupType::elementary(3));
  const auto h = subgroup_generated(s3, Element{0b011});
  StateTrainConfig cfg;
  cfg.train.seed = 4;
  cfg.train.mc_samples = 20;
  cfg.train.max_iters = 100;
  Rng rng(4);
  const auto r = variational_state_train(invariant_state_source(CosetBasis(s3, h)), 3, cfg, rng);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.group.type(), GroupType::elementary(3));
  EXPECT_EQ(r.hidden.elements(), h.elements());
}

TEST(StateTrain, UniformSourceAcceptsMaximalSubgroup) {
  StateTrainConfig cfg;
  cfg.train.seed = 5;
  cfg.train.mc_samples = 10;
  cfg.train.max_iters = 50;
  Rng rng(5);
  const GroupStructure g(GroupType::cyclic(3));
  const auto r = variational_state_train(invariant_state_source(CosetBasis(g, whole_group(g))), 3, cfg, rng);
  EXPECT_NEAR(r.final_cost, 0.0, kTol);
  EXPECT_TRUE(r.hidden.cyclic_generator().has_value());
  // Maximal among cyclic subgroups of the learned group.
  for (Element e = 0; e < r.group.order(); ++e) EXPECT_LE(subgroup_generated(r.group, e).size(), r.hidden.size());
}

TEST(StateTrain, Errors) {
  StateTrainConfig cfg;
  cfg.copies = 0;
  Rng rng(6);
  const GroupStructure g(GroupType::cyclic(3));
  EXPECT_THROW(variational_state_train(invariant_state_source(CosetBasis(g, whole_group(g))), 3, cfg, rng),
               ParameterError);
  cfg.copies = 2;
  EXPECT_THROW(variational_state_train(invariant_state_source(CosetBasis(g, whole_group(g))), 4, cfg, rng), ShapeError);
  EXPECT_THROW(variational_state_train(invariant_state_source(CosetBasis(g, whole_group(g))), 11, cfg, rng),
               SizeLimitError);
}

}  // namespace
}  // namespace hspc

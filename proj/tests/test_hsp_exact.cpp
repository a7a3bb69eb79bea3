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

#include <algorithm>
#include <cmath>

#include "hspc/compress_db.hpp"
#include "hspc/errors.hpp"
#include "hspc/hsp_exact.hpp"
#include "reference.hpp"

namespace hspc {
namespace {

Oracle planted(const GroupStructure& g, const Subgroup& h, Rng& rng, bool ordered = false) {
  return Oracle(g.n(), g.n(), generate_hsp_sequence({g, h, g.n(), 0}, rng, ordered));
}

std::vector<Element> perp_of(const GroupStructure& g, const Subgroup& h) {
  return ref::Group(g).orthogonal(h.elements());
}

SampleBatch batch_of(const GroupStructure& g, std::vector<Element> s) { return SampleBatch{g, std::move(s)}; }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

TEST(FourierSample, SimonSamplesAreOrthogonal) {
  const GroupStructure g(GroupType::elementary(3));
  const auto h = subgroup_generated(g, Element{0b001});
  Rng rng(1);
  const auto f = planted(g, h, rng, true);
  QueryCounter counter;
  const auto batch = fourier_sample_batch(f, g, 6, rng, &counter);
  ASSERT_EQ(batch.samples.size(), 6u);
  EXPECT_EQ(counter.count(), 6u);
  for (Element j : batch.samples) EXPECT_EQ(j & 1u, 0u);
}

TEST(FourierSample, WholeGroupGivesZero) {
  const GroupStructure g(GroupType({2, 1}));
  const Oracle f(3, 1, std::vector<std::uint64_t>(8, 1));
  Rng rng(2);
  for (Element j : fourier_sample_batch(f, g, 20, rng).samples) EXPECT_EQ(j, 0u);
}

TEST(FourierSample, PeriodFourOnZ16) {
  const GroupStructure g(GroupType::cyclic(4));
  std::vector<std::uint64_t> seq(16);
  for (int i = 0; i < 16; ++i) seq[i] = i % 4;
  const Oracle f(4, 2, seq);
  Rng rng(3);
  for (auto mode : {SamplingMode::kBorn, SamplingMode::kCircuit})
    for (Element j : fourier_sample_batch(f, g, 40, rng, nullptr, mode).samples) EXPECT_EQ(j % 4, 0u) << j;
}

TEST(FourierSample, Errors) {
  const GroupStructure g(GroupType::elementary(3));
  const Oracle f(3, 1, std::vector<std::uint64_t>(8, 0));
  Rng rng(4);
  EXPECT_THROW(fourier_sample_batch(f, g, 0, rng), ParameterError);
  EXPECT_THROW(fourier_sample_batch(f, GroupStructure(GroupType::elementary(4)), 3, rng), ShapeError);
}

TEST(FourierSample, ExhaustiveSupportInOrthogonalGroup) {
  Rng rng(5);
  for (int n = 1; n <= 4; ++n)
    for (const auto& t : GroupType::all(n))
      for (const auto& p : ref::all_permutations(n)) {
        const GroupStructure g(t, BitPermutation(p));
        for (const auto& h : all_subgroups(g)) {
          const auto perp = perp_of(g, h);
          for (Element j : fourier_sample_batch(planted(g, h, rng), g, 8, rng).samples)
            ASSERT_TRUE(std::binary_search(perp.begin(), perp.end(), j)) << g.descriptor();
        }
      }
}

TEST(KernelIntersection, RecoversHiddenSubgroup) {
  Rng rng(6);
  for (int n = 2; n <= 4; ++n)
    for (const auto& t : GroupType::all(n)) {
      const GroupStructure g(t);
      for (const auto& h : all_subgroups(g)) {
        const auto f = planted(g, h, rng);
        int hits = 0;
        for (int trial = 0; trial < 100; ++trial)
          hits += kernel_intersection(g, fourier_sample_batch(f, g, 4 * n, rng)) == h;
        EXPECT_GE(hits, 95) << g.descriptor() << " |H|=" << h.size();
      }
    }
}

TEST(KernelIntersection, SingleBitGroupHasExactFailureRate) {
  // With 4 samples from Z_2 the trivial subgroup is missed exactly when all samples are 0.
  const GroupStructure g(GroupType::cyclic(1));
  const auto h = subgroup_generated(g, Element{0});
  const Oracle f(1, 1, {0, 1});
  Rng rng(7);
  int hits = 0;
  const int trials = 4000;
  for (int k = 0; k < trials; ++k) hits += kernel_intersection(g, fourier_sample_batch(f, g, 4, rng)) == h;
  const double p = 15.0 / 16.0, sd = std::sqrt(p * (1 - p) / trials);
  EXPECT_NEAR(hits / static_cast<double>(trials), p, 4 * sd);
}

TEST(KernelIntersection, Examples) {
  const GroupStructure g(GroupType::elementary(3));
  EXPECT_EQ(kernel_intersection(g, batch_of(g, {0})), whole_group(g));
  const auto h = kernel_intersection(g, batch_of(g, {0b110, 0b101, 0b011}));
  EXPECT_EQ(h.elements(), (std::vector<Element>{0b000, 0b111}));
  EXPECT_THROW(kernel_intersection(g, batch_of(g, {})), ShapeError);
}

TEST(SolveCongruences, Examples) {
  const GroupStructure s3(GroupType::elementary(3));
  EXPECT_EQ(solve_congruences(s3, batch_of(s3, {0b110, 0b101})), 0b111u);
  EXPECT_EQ(solve_congruences(s3, batch_of(s3, {0b100, 0b010, 0b001})), 0u);
  const GroupStructure z8(GroupType::cyclic(3));
  EXPECT_EQ(solve_congruences(z8, batch_of(z8, {4})), 0b010u);
  EXPECT_THROW(solve_congruences(z8, batch_of(z8, {})), ShapeError);
}

TEST(SolveCongruences, SolutionSatisfiesAndSitsInKernel) {
  Rng rng(8);
  for (int n = 1; n <= 4; ++n)
    for (const auto& t : GroupType::all(n))
      for (const auto& p : ref::all_permutations(n)) {
        const GroupStructure g(t, BitPermutation(p));
        const ref::Group r(g);
        for (int trial = 0; trial < 10; ++trial) {
          std::vector<Element> js(1 + rng.below(3));
          for (auto& j : js) j = rng.below(g.order());
          const auto batch = batch_of(g, js);
          const Element s = solve_congruences(g, batch);
          ASSERT_TRUE(satisfies_congruences(g, batch, s));
          for (Element j : js) ASSERT_TRUE(r.trivial(j, s));
          const auto k = kernel_intersection(g, batch);
          const auto hs = subgroup_generated(g, s);
          for (Element e : hs.elements()) ASSERT_TRUE(k.contains(e));
          // tau-minimal nonzero solution, or 0 when the kernel is trivial.
          Element best = 0;
          for (Element c = 1; c < g.order() && !best; ++c)
            if (std::all_of(js.begin(), js.end(), [&](Element j) { return r.trivial(j, c); })) best = c;
          ASSERT_EQ(s, best);
        }
      }
}

TEST(CollisionBaseline, Examples) {
  const GroupStructure g(GroupType::elementary(3));
  const auto h = subgroup_generated(g, Element{0b001});
  Rng rng(9);
  const auto f = planted(g, h, rng);
  std::vector<double> q;
  for (int k = 0; k < 1000; ++k) {
    const auto r = classical_collision_baseline(f, g, rng);
    ASSERT_TRUE(r.collided);
    ASSERT_EQ(r.generator, 0b001u);
    q.push_back(static_cast<double>(r.queries));
  }
  const double med = median(q);
  EXPECT_GE(med, 2.0);
  EXPECT_LE(med, 10.0);

  const Oracle c(3, 1, std::vector<std::uint64_t>(8, 0));
  const auto rc = classical_collision_baseline(c, g, rng);
  EXPECT_EQ(rc.queries, 2u);

  std::vector<std::uint64_t> inj(8);
  for (int i = 0; i < 8; ++i) inj[i] = i;
  const auto ri = classical_collision_baseline(Oracle(3, 3, inj), g, rng);
  EXPECT_FALSE(ri.collided);
  EXPECT_EQ(ri.queries, 8u);
  EXPECT_EQ(ri.generator, 0u);
}

TEST(CollisionBaseline, GeneratorIsInHiddenSubgroup) {
  Rng rng(10);
  for (const auto& t : GroupType::all(4)) {
    const GroupStructure g(t);
    for (const auto& h : all_subgroups(g)) {
      if (h.is_trivial()) continue;
      const auto f = planted(g, h, rng);
      for (int k = 0; k < 10; ++k) {
        const auto r = classical_collision_baseline(f, g, rng);
        ASSERT_TRUE(r.collided);
        ASSERT_TRUE(h.contains(r.generator));
        ASSERT_NE(r.generator, 0u);
      }
    }
  }
}

TEST(CollisionBaseline, MedianGrowsLikeSquareRoot) {
  Rng rng(11);
  std::vector<double> med;
  for (int n : {6, 8, 10}) {
    const GroupStructure g(GroupType::elementary(n));
    std::vector<double> q;
    for (int k = 0; k < 500; ++k) {
      const auto h = subgroup_generated(g, 1 + rng.below(g.order() - 1));
      q.push_back(static_cast<double>(classical_collision_baseline(planted(g, h, rng), g, rng).queries));
    }
    med.push_back(median(q));
  }
  for (std::size_t k = 0; k + 1 < med.size(); ++k) {
    const double ratio = med[k + 1] / med[k];
    EXPECT_GE(ratio, 1.4);
    EXPECT_LE(ratio, 2.8);
  }
}

int char_of(const std::vector<std::uint8_t>& c, Element i) { return c[i]; }

TEST(Bisection, Examples) {
  const GroupStructure z8(GroupType::cyclic(3));
  const auto c4 = characteristic_function(z8, subgroup_generated(z8, Element{4}));
  auto r = recover_generator_by_bisection([&](Element i) { return char_of(c4, i); }, z8);
  EXPECT_EQ(r.last_occupied, 3u);
  EXPECT_EQ(r.generator, 4u);

  const auto c0 = characteristic_function(z8, subgroup_generated(z8, Element{0}));
  r = recover_generator_by_bisection([&](Element i) { return char_of(c0, i); }, z8);
  EXPECT_EQ(r.last_occupied, 7u);
  EXPECT_EQ(r.generator, 0u);

  const auto c2 = characteristic_function(z8, subgroup_generated(z8, Element{2}));
  r = recover_generator_by_bisection([&](Element i) { return char_of(c2, i); }, z8);
  EXPECT_EQ(r.last_occupied, 1u);
  EXPECT_EQ(r.generator, 2u);

  EXPECT_THROW(recover_generator_by_bisection([](Element) { return 1; }, z8), InvariantError);
}

TEST(Bisection, CyclicGroupsAndQueryBound) {
  for (int n = 1; n <= 8; ++n) {
    const GroupStructure g(GroupType::cyclic(n));
    for (Element s = 0; s < g.order(); ++s) {
      const auto h = subgroup_generated(g, s);
      const auto c = characteristic_function(g, h);
      const auto r = recover_generator_by_bisection([&](Element i) { return char_of(c, i); }, g);
      ASSERT_LE(r.queries, static_cast<std::uint64_t>(2 * n + 2));
      ASSERT_EQ(subgroup_generated(g, r.generator), h) << n << " " << s;
    }
  }
  for (const auto& t : GroupType::all(5)) {
    const GroupStructure g(t);
    for (const auto& h : all_subgroups(g)) {
      const auto c = characteristic_function(g, h);
      const auto r = recover_generator_by_bisection([&](Element i) { return char_of(c, i); }, g);
      ASSERT_LE(r.queries, 12u);
    }
  }
}

TEST(Pipeline, RecoversAndCountsQueries) {
  Rng rng(12);
  const GroupStructure g(GroupType({2, 2}));
  const auto h = subgroup_generated(g, Element{0b1010});
  const auto f = planted(g, h, rng);
  const auto r = quantum_hsp_pipeline(f, g, 16, rng);
  EXPECT_EQ(r.hidden, h);
  EXPECT_EQ(r.representatives, cosets(g, h));
  EXPECT_EQ(r.queries, 16u + g.order() / h.size());
  for (std::size_t k = 0; k < r.values.size(); ++k) EXPECT_EQ(r.values[k], f(r.representatives[k]));
}

TEST(AllSubgroups, CountsForSmallGroups) {
  EXPECT_EQ(all_subgroups(GroupStructure(GroupType::elementary(3))).size(), 16u);
  EXPECT_EQ(all_subgroups(GroupStructure(GroupType::cyclic(4))).size(), 5u);
  EXPECT_EQ(all_subgroups(GroupStructure(GroupType({2, 1}))).size(), 8u);
}

}  // namespace
}  // namespace hspc

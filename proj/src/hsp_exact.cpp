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

#include "hspc/hsp_exact.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "hspc/errors.hpp"

namespace hspc {

namespace {

void check_oracle(const Oracle& f, const GroupStructure& g) {
  if (f.n != g.n()) throw ShapeError("oracle index width does not match the group");
}

Element sample_from(const std::vector<double>& dist, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  Element last = 0;
  for (Element j = 0; j < dist.size(); ++j) {
    if (dist[j] <= 0.0) continue;
    last = j;
    acc += dist[j];
    if (u < acc) return j;
  }
  return last;
}

}  // namespace

SampleBatch fourier_sample_batch(const Oracle& f, const GroupStructure& g, int K, Rng& rng, QueryCounter* counter,
                                 SamplingMode mode) {
  check_oracle(f, g);
  if (K < 1) throw ParameterError("K must be at least 1");
  const auto qft = QftParams::for_group(g.type());
  const auto perm = PermParams::for_perm(g.perm());
  SampleBatch batch{g, {}};
  batch.samples.reserve(K);
  if (mode == SamplingMode::kBorn) {
    const auto dist = exact_output_distribution(f, qft, perm);
    for (int k = 0; k < K; ++k) batch.samples.push_back(sample_from(dist, rng));
  } else {
    for (int k = 0; k < K; ++k) batch.samples.push_back(hsp_circuit_sample(f, qft, perm, rng));
  }
  if (counter) counter->add(static_cast<std::uint64_t>(K));
  return batch;
}

bool satisfies_congruences(const GroupStructure& g, const SampleBatch& batch, Element s) {
  for (Element j : batch.samples)
    if (!g.character_trivial(j, s)) return false;
  return true;
}

Element solve_congruences(const GroupStructure& g, const SampleBatch& batch) {
  if (batch.samples.empty()) throw ShapeError("solve_congruences needs at least one sample");
  for (Element s = 1; s < g.order(); ++s)
    if (satisfies_congruences(g, batch, s)) return s;
  return 0;
}

Subgroup kernel_intersection(const GroupStructure& g, const SampleBatch& batch) {
  if (batch.samples.empty()) throw ShapeError("kernel_intersection needs at least one sample");
  // Duplicate samples impose the same constraint.
  std::set<Element> distinct(batch.samples.begin(), batch.samples.end());
  SampleBatch unique{g, {distinct.begin(), distinct.end()}};
  std::vector<Element> kernel;
  for (Element i = 0; i < g.order(); ++i)
    if (satisfies_congruences(g, unique, i)) kernel.push_back(i);
  return Subgroup(g, std::move(kernel));
}

CollisionResult classical_collision_baseline(const Oracle& f, const GroupStructure& g, Rng& rng) {
  check_oracle(f, g);
  const std::uint64_t N = g.order();
  // Lazy Fisher-Yates: `moved` records the displaced entries of the virtual array 0..N-1.
  std::unordered_map<std::uint64_t, std::uint64_t> moved;
  auto at = [&](std::uint64_t k) {
    auto it = moved.find(k);
    return it == moved.end() ? k : it->second;
  };
  std::unordered_map<std::uint64_t, Element> seen;
  CollisionResult res;
  for (std::uint64_t k = 0; k < N; ++k) {
    const std::uint64_t r = k + rng.below(N - k);
    const std::uint64_t pick = at(r);
    moved[r] = at(k);
    const Element b = pick;
    ++res.queries;
    auto [it, inserted] = seen.emplace(f(b), b);
    if (!inserted) {
      res.generator = g.op(g.inverse(it->second), b);
      res.collided = true;
      return res;
    }
  }
  return res;
}

BisectionResult recover_generator_by_bisection(const std::function<int(Element)>& char_fn, const GroupStructure& g) {
  BisectionResult res;
  auto c = [&](Element i) {
    ++res.queries;
    return char_fn(i);
  };
  if (c(0) != 0) throw InvariantError("characteristic function marks index 0 free; index 0 is always occupied");
  // Invariant: c(lo) = 0 and every index >= hi is free.
  Element lo = 0, hi = g.order();
  while (hi - lo > 1) {
    const Element mid = lo + (hi - lo) / 2;
    if (c(mid) == 0)
      lo = mid;
    else
      hi = mid;
  }
  res.last_occupied = lo;
  res.generator = (lo + 1) & (g.order() - 1);
  return res;
}

QuantumHspResult quantum_hsp_pipeline(const Oracle& f, const GroupStructure& g, int K, Rng& rng) {
  QueryCounter counter;
  auto batch = fourier_sample_batch(f, g, K, rng, &counter);
  Subgroup h = kernel_intersection(g, batch);
  QuantumHspResult res{h, cosets(g, h), {}, 0};
  res.values.reserve(res.representatives.size());
  for (Element c : res.representatives) {
    res.values.push_back(f(c));
    counter.add();
  }
  res.queries = counter.count();
  return res;
}

std::vector<Subgroup> all_subgroups(const GroupStructure& g) {
  std::vector<Subgroup> found{subgroup_generated(g, Element{0})};
  std::set<std::vector<Element>> keys{found.front().elements()};
  for (std::size_t idx = 0; idx < found.size(); ++idx) {
    for (Element e = 1; e < g.order(); ++e) {
      if (found[idx].contains(e)) continue;
      auto gens = found[idx].generators();
      gens.push_back(e);
      Subgroup h = subgroup_generated(g, gens);
      if (keys.insert(h.elements()).second) found.push_back(std::move(h));
    }
  }
  return found;
}

}  // namespace hspc

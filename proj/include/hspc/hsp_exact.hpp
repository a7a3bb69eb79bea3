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
 * Hidden-subgroup recovery for a known group: Fourier sampling, congruence
 * solving, kernel intersection, a classical collision baseline and recovery
 * of a generator from a characteristic function by bisection.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hspc/group.hpp"
#include "hspc/qsim.hpp"
#include "hspc/rng.hpp"

namespace hspc {

struct SampleBatch {
  GroupStructure group;
  std::vector<Element> samples;
};

/// Number of oracle (or characteristic-function) invocations made so far.
class QueryCounter {
 public:
  void add(std::uint64_t k = 1) { count_ += k; }
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_ = 0;
};

enum class SamplingMode {
  kBorn,     ///< draw from the exact output distribution (same law as running each shot)
  kCircuit,  ///< simulate every shot with mid-circuit measurement
};

/// K draws from the HSP circuit configured with the exact parameters of `g`.
/// Every shot is one oracle invocation.
SampleBatch fourier_sample_batch(const Oracle& f, const GroupStructure& g, int K, Rng& rng,
                                 QueryCounter* counter = nullptr, SamplingMode mode = SamplingMode::kBorn);

/// tau-minimal nonzero s with chi_j(s) = 1 for every sample j, or 0 when none exists.
Element solve_congruences(const GroupStructure& g, const SampleBatch& batch);
bool satisfies_congruences(const GroupStructure& g, const SampleBatch& batch, Element s);

/// Intersection of the kernels of the sampled characters.
Subgroup kernel_intersection(const GroupStructure& g, const SampleBatch& batch);

struct CollisionResult {
  Element generator = 0;  ///< a^{-1} * b for the first colliding pair, 0 if none
  std::uint64_t queries = 0;
  bool collided = false;
};

/// Queries distinct uniformly random indices until two values coincide.
CollisionResult classical_collision_baseline(const Oracle& f, const GroupStructure& g, Rng& rng);

struct BisectionResult {
  Element generator = 0;
  Element last_occupied = 0;
  std::uint64_t queries = 0;
};

/// Largest occupied index i_f by binary search, generator = (i_f + 1) mod 2^n.
/// Requires the occupied indices to form a tau-prefix, as they do for the
/// subgroups of the canonical cyclic group.
BisectionResult recover_generator_by_bisection(const std::function<int(Element)>& char_fn, const GroupStructure& g);

struct QuantumHspResult {
  Subgroup hidden;
  std::vector<Element> representatives;
  std::vector<std::uint64_t> values;
  std::uint64_t queries = 0;  ///< K Fourier shots plus one query per coset
};

/// Fourier sampling, kernel intersection, then one oracle query per coset.
QuantumHspResult quantum_hsp_pipeline(const Oracle& f, const GroupStructure& g, int K, Rng& rng);

/// Every subgroup of `g`, in order of discovery.  Intended for small n.
std::vector<Subgroup> all_subgroups(const GroupStructure& g);

}  // namespace hspc

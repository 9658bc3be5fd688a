// Copyright 2026 The dearsim Authors.
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

#include <Eigen/Core>

#include <vector>

namespace dearsim {

// Data-level ring collectives over P in-process virtual workers, executed
// in lock-step rounds. These exist to check, on real numbers, that
// reduce-scatter followed by all-gather is equivalent to all-reduce and
// that synchronous SGD keeps replicas bit-identical: each chunk's sum is
// accumulated in ring-arrival order exactly once, so every worker ends up
// with the same bits without any tolerance.

using Vector = Eigen::VectorXd;

struct ChunkRange {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;  // exclusive

  Eigen::Index size() const { return end - begin; }
};

/// Contiguous split of [0, d_elems) into `workers` chunks; the first
/// (d_elems mod workers) chunks are one element longer.
std::vector<ChunkRange> chunk_ranges(Eigen::Index d_elems, int workers);

struct ReduceScatterResult {
  // chunks[c] is chunk c fully reduced (summed over workers); after the
  // ring pass it lives on worker (c + P - 1) mod P.
  std::vector<Vector> chunks;
  std::vector<ChunkRange> ranges;
  int rounds = 0;
  // sent_elems[round][worker]: elements sent by that worker in that round.
  std::vector<std::vector<Eigen::Index>> sent_elems;
};

/// Ring reduce-scatter over P equal-length vectors in exactly P-1 rounds:
/// in round r, worker p sends chunk (p - r) mod P to worker (p + 1) mod P
/// and accumulates the chunk it receives.
ReduceScatterResult ring_reduce_scatter(const std::vector<Vector>& vectors);

struct AllGatherResult {
  std::vector<Vector> vectors;  // one full vector per worker, all identical
  int rounds = 0;
  std::vector<std::vector<Eigen::Index>> sent_elems;
};

/// Ring all-gather in exactly P-1 rounds. `chunks` is indexed by chunk id
/// with chunk c initially held by worker (c + P - 1) mod P (the
/// reduce-scatter placement); `ranges` must partition the vector exactly.
AllGatherResult ring_all_gather(const std::vector<Vector>& chunks,
                                const std::vector<ChunkRange>& ranges);

/// Reduce-scatter followed by all-gather: every worker ends with the
/// elementwise sum.
std::vector<Vector> all_reduce_sum(const std::vector<Vector>& vectors);

/// Sum via the ring pair, then an explicit 1/P scaling on every worker.
std::vector<Vector> all_reduce_average(const std::vector<Vector>& vectors);

struct SgdState {
  Vector weights;
  double learning_rate = 0.0;
};

/// One synchronous data-parallel step: w <- w - lr * mean(gradients).
/// Requires all workers to start from bit-identical weights and leaves them
/// bit-identical.
std::vector<SgdState> sgd_step(const std::vector<SgdState>& states,
                               const std::vector<Vector>& local_gradients);

}  // namespace dearsim

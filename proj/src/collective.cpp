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

#include "dearsim/collective.hpp"

#include <algorithm>
#include <stdexcept>

namespace dearsim {

namespace {

int mod(int a, int p) { return ((a % p) + p) % p; }

void check_vectors(const std::vector<Vector>& vectors) {
  if (vectors.empty()) {
    throw std::invalid_argument("collective: need at least one worker");
  }
  for (const Vector& v : vectors) {
    if (v.size() != vectors.front().size()) {
      throw std::invalid_argument("collective: vector length mismatch");
    }
  }
}

}  // namespace

std::vector<ChunkRange> chunk_ranges(Eigen::Index d_elems, int workers) {
  if (workers < 1) {
    throw std::invalid_argument("chunk_ranges: workers must be >= 1");
  }
  if (d_elems < 0) {
    throw std::invalid_argument("chunk_ranges: d_elems must be >= 0");
  }
  const Eigen::Index p = workers;
  const Eigen::Index base = d_elems / p;
  const Eigen::Index extra = d_elems % p;
  std::vector<ChunkRange> ranges(static_cast<std::size_t>(workers));
  Eigen::Index at = 0;
  for (Eigen::Index c = 0; c < p; ++c) {
    const Eigen::Index len = base + (c < extra ? 1 : 0);
    ranges[static_cast<std::size_t>(c)] = {at, at + len};
    at += len;
  }
  return ranges;
}

ReduceScatterResult ring_reduce_scatter(const std::vector<Vector>& vectors) {
  check_vectors(vectors);
  const int p = static_cast<int>(vectors.size());
  const Eigen::Index d = vectors.front().size();

  ReduceScatterResult result;
  result.ranges = chunk_ranges(d, p);
  result.rounds = p - 1;

  std::vector<Vector> state = vectors;
  std::vector<Vector> inbox(static_cast<std::size_t>(p));
  for (int r = 0; r < p - 1; ++r) {
    auto& sent = result.sent_elems.emplace_back(
        static_cast<std::size_t>(p), Eigen::Index{0});
    // All sends are snapshotted before any accumulation; the rounds are
    // lock-step.
    for (int src = 0; src < p; ++src) {
      const int chunk = mod(src - r, p);
      const ChunkRange& range = result.ranges[static_cast<std::size_t>(chunk)];
      const int dst = mod(src + 1, p);
      inbox[static_cast<std::size_t>(dst)] =
          state[static_cast<std::size_t>(src)].segment(range.begin,
                                                       range.size());
      sent[static_cast<std::size_t>(src)] = range.size();
    }
    for (int w = 0; w < p; ++w) {
      const int chunk = mod(w - 1 - r, p);
      const ChunkRange& range = result.ranges[static_cast<std::size_t>(chunk)];
      state[static_cast<std::size_t>(w)].segment(range.begin, range.size()) +=
          inbox[static_cast<std::size_t>(w)];
    }
  }

  result.chunks.resize(static_cast<std::size_t>(p));
  for (int c = 0; c < p; ++c) {
    const int owner = mod(c - 1, p);  // worker holding chunk c fully reduced
    const ChunkRange& range = result.ranges[static_cast<std::size_t>(c)];
    result.chunks[static_cast<std::size_t>(c)] =
        state[static_cast<std::size_t>(owner)].segment(range.begin,
                                                       range.size());
  }
  return result;
}

AllGatherResult ring_all_gather(const std::vector<Vector>& chunks,
                                const std::vector<ChunkRange>& ranges) {
  if (chunks.empty() || chunks.size() != ranges.size()) {
    throw std::invalid_argument(
        "ring_all_gather: chunk/range counts must match and be non-empty");
  }
  const int p = static_cast<int>(chunks.size());
  Eigen::Index at = 0;
  for (int c = 0; c < p; ++c) {
    const ChunkRange& range = ranges[static_cast<std::size_t>(c)];
    if (range.begin != at || range.size() < 0 ||
        range.size() != chunks[static_cast<std::size_t>(c)].size()) {
      throw std::invalid_argument(
          "ring_all_gather: ranges must cover all element indices exactly "
          "once");
    }
    at = range.end;
  }
  const Eigen::Index d = at;

  AllGatherResult result;
  result.rounds = p - 1;
  result.vectors.assign(static_cast<std::size_t>(p), Vector::Zero(d));
  // Chunk c starts on worker (c + p - 1) mod p, matching reduce-scatter.
  for (int c = 0; c < p; ++c) {
    const int owner = mod(c - 1, p);
    result.vectors[static_cast<std::size_t>(owner)].segment(
        ranges[static_cast<std::size_t>(c)].begin,
        ranges[static_cast<std::size_t>(c)].size()) =
        chunks[static_cast<std::size_t>(c)];
  }

  for (int r = 0; r < p - 1; ++r) {
    auto& sent = result.sent_elems.emplace_back(
        static_cast<std::size_t>(p), Eigen::Index{0});
    // In round r, worker w forwards chunk (w + 1 - r) mod p to its right
    // neighbour; after p-1 rounds everyone holds every chunk.
    for (int src = 0; src < p; ++src) {
      const int chunk = mod(src + 1 - r, p);
      const ChunkRange& range = ranges[static_cast<std::size_t>(chunk)];
      const int dst = mod(src + 1, p);
      result.vectors[static_cast<std::size_t>(dst)].segment(range.begin,
                                                            range.size()) =
          result.vectors[static_cast<std::size_t>(src)].segment(range.begin,
                                                                range.size());
      sent[static_cast<std::size_t>(src)] = range.size();
    }
  }
  return result;
}

std::vector<Vector> all_reduce_sum(const std::vector<Vector>& vectors) {
  const ReduceScatterResult rs = ring_reduce_scatter(vectors);
  return ring_all_gather(rs.chunks, rs.ranges).vectors;
}

std::vector<Vector> all_reduce_average(const std::vector<Vector>& vectors) {
  std::vector<Vector> summed = all_reduce_sum(vectors);
  const double inv_p = 1.0 / static_cast<double>(vectors.size());
  for (Vector& v : summed) v *= inv_p;
  return summed;
}

std::vector<SgdState> sgd_step(const std::vector<SgdState>& states,
                               const std::vector<Vector>& local_gradients) {
  if (states.empty() || states.size() != local_gradients.size()) {
    throw std::invalid_argument(
        "sgd_step: need one gradient per worker state");
  }
  for (const SgdState& s : states) {
    if (s.weights.size() != states.front().weights.size() ||
        s.weights != states.front().weights) {
      throw std::invalid_argument(
          "sgd_step: replica divergence (starting weights differ)");
    }
    if (s.learning_rate != states.front().learning_rate) {
      throw std::invalid_argument("sgd_step: learning rates differ");
    }
  }
  for (const Vector& g : local_gradients) {
    if (g.size() != states.front().weights.size()) {
      throw std::invalid_argument("sgd_step: gradient length mismatch");
    }
  }

  const std::vector<Vector> mean = all_reduce_average(local_gradients);
  std::vector<SgdState> updated = states;
  for (std::size_t w = 0; w < updated.size(); ++w) {
    updated[w].weights -= updated[w].learning_rate * mean[w];
  }
  return updated;
}

}  // namespace dearsim

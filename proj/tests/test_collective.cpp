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

#include <doctest.h>

#include <stdexcept>

#include <random>

#include "dearsim/collective.hpp"

using namespace dearsim;

namespace {

std::vector<Vector> random_vectors(int workers, Eigen::Index elems,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Vector> out(static_cast<std::size_t>(workers));
  for (Vector& v : out) {
    v.resize(elems);
    for (Eigen::Index i = 0; i < elems; ++i) v(i) = dist(rng);
  }
  return out;
}

Vector direct_sum(const std::vector<Vector>& vectors) {
  Vector sum = Vector::Zero(vectors.front().size());
  for (const Vector& v : vectors) sum += v;
  return sum;
}

// |a - b| <= tol * max(1, |b|) elementwise.
void check_close(const Vector& actual, const Vector& expected, double tol) {
  REQUIRE_EQ(actual.size(), expected.size());
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    const double scale = std::max(1.0, std::abs(expected(i)));
    CHECK(std::abs(actual(i) - expected(i)) <= tol * scale);
  }
}

}  // namespace

TEST_CASE("chunking covers the vector with balanced pieces") {
  for (int p : {1, 2, 3, 4, 8, 16}) {
    for (Eigen::Index d : {Eigen::Index{0}, Eigen::Index{1},
                           Eigen::Index{p - 1}, Eigen::Index{p},
                           Eigen::Index{p + 1}, Eigen::Index{1000}}) {
      if (d < 0) continue;
      const auto ranges = chunk_ranges(d, p);
      REQUIRE_EQ(ranges.size(), static_cast<std::size_t>(p));
      Eigen::Index at = 0;
      for (const ChunkRange& r : ranges) {
        CHECK_EQ(r.begin, at);
        CHECK(r.size() >= d / p);
        CHECK(r.size() <= d / p + 1);
        at = r.end;
      }
      CHECK_EQ(at, d);
    }
  }
}

TEST_CASE("single worker is the identity") {
  const auto vectors = random_vectors(1, 7, 1);
  const ReduceScatterResult rs = ring_reduce_scatter(vectors);
  CHECK_EQ(rs.rounds, 0);
  CHECK(rs.chunks[0] == vectors[0]);
  const AllGatherResult ag = ring_all_gather(rs.chunks, rs.ranges);
  CHECK_EQ(ag.rounds, 0);
  CHECK(ag.vectors[0] == vectors[0]);
}

TEST_CASE("identical integer inputs reduce to exact multiples") {
  Vector v(8);
  for (Eigen::Index i = 0; i < 8; ++i) v(i) = static_cast<double>(i + 1);
  const std::vector<Vector> vectors(4, v);
  const ReduceScatterResult rs = ring_reduce_scatter(vectors);
  CHECK_EQ(rs.rounds, 3);
  for (int c = 0; c < 4; ++c) {
    const ChunkRange& r = rs.ranges[static_cast<std::size_t>(c)];
    const Vector expected = 4.0 * v.segment(r.begin, r.size());
    CHECK(rs.chunks[static_cast<std::size_t>(c)] == expected);
  }
}

TEST_CASE("reduce-scatter matches a direct elementwise sum") {
  const auto vectors = random_vectors(4, 8, 2);
  const Vector expected = direct_sum(vectors);
  const ReduceScatterResult rs = ring_reduce_scatter(vectors);
  for (int c = 0; c < 4; ++c) {
    const ChunkRange& r = rs.ranges[static_cast<std::size_t>(c)];
    check_close(rs.chunks[static_cast<std::size_t>(c)],
                expected.segment(r.begin, r.size()), 1e-12);
  }
}

TEST_CASE("all-gather of a known partition restores it everywhere") {
  Vector u(10);
  for (Eigen::Index i = 0; i < 10; ++i) u(i) = 0.5 * static_cast<double>(i);
  const auto ranges = chunk_ranges(10, 4);
  std::vector<Vector> chunks;
  for (const ChunkRange& r : ranges) {
    chunks.push_back(u.segment(r.begin, r.size()));
  }
  const AllGatherResult ag = ring_all_gather(chunks, ranges);
  CHECK_EQ(ag.rounds, 3);
  for (const Vector& v : ag.vectors) CHECK(v == u);
}

TEST_CASE("round and traffic accounting") {
  for (int p : {2, 3, 4, 8, 16}) {
    for (Eigen::Index d :
         {Eigen::Index{1}, Eigen::Index{p - 1}, Eigen::Index{p},
          Eigen::Index{p + 1}, Eigen::Index{1000}}) {
      const auto vectors = random_vectors(p, d, 77);
      const ReduceScatterResult rs = ring_reduce_scatter(vectors);
      const AllGatherResult ag = ring_all_gather(rs.chunks, rs.ranges);
      CHECK_EQ(rs.rounds, p - 1);
      CHECK_EQ(ag.rounds, p - 1);
      const Eigen::Index lo = d / p;
      const Eigen::Index hi = lo + (d % p == 0 ? 0 : 1);
      for (const auto& round : rs.sent_elems) {
        REQUIRE_EQ(round.size(), static_cast<std::size_t>(p));
        for (Eigen::Index sent : round) {
          CHECK((sent == lo || sent == hi));
        }
      }
      for (const auto& round : ag.sent_elems) {
        for (Eigen::Index sent : round) {
          CHECK((sent == lo || sent == hi));
        }
      }
    }
  }
}

TEST_CASE("decoupled pair equals the direct sum on every worker") {
  for (int p : {1, 2, 3, 4, 8, 16}) {
    for (Eigen::Index d :
         {Eigen::Index{1}, Eigen::Index{std::max(1, p - 1)}, Eigen::Index{p},
          Eigen::Index{p + 1}, Eigen::Index{1000}}) {
      const auto vectors =
          random_vectors(p, d, 1000 + static_cast<std::uint64_t>(p));
      const Vector expected = direct_sum(vectors);
      const auto outputs = all_reduce_sum(vectors);
      REQUIRE_EQ(outputs.size(), static_cast<std::size_t>(p));
      for (const Vector& v : outputs) check_close(v, expected, 1e-12);
      // Replicas agree bit-for-bit, not just within tolerance.
      for (const Vector& v : outputs) CHECK(v == outputs.front());
    }
  }
}

TEST_CASE("all-gather rejects bad coverage") {
  const auto vectors = random_vectors(4, 8, 3);
  const ReduceScatterResult rs = ring_reduce_scatter(vectors);
  SUBCASE("gap") {
    auto ranges = rs.ranges;
    ranges[1].begin += 1;  // hole between chunk 0 and chunk 1
    auto chunks = rs.chunks;
    chunks[1] = chunks[1].tail(chunks[1].size() - 1);
    CHECK_THROWS_AS(ring_all_gather(chunks, ranges), std::invalid_argument);
  }
  SUBCASE("overlap") {
    auto ranges = rs.ranges;
    ranges[1].begin -= 1;
    CHECK_THROWS_AS(ring_all_gather(rs.chunks, ranges), std::invalid_argument);
  }
  SUBCASE("length mismatch between workers") {
    auto bad = vectors;
    bad[2].resize(5);
    CHECK_THROWS_AS(ring_reduce_scatter(bad), std::invalid_argument);
  }
}

TEST_CASE("averaging") {
  SUBCASE("identical inputs average to themselves") {
    Vector v(6);
    for (Eigen::Index i = 0; i < 6; ++i) v(i) = static_cast<double>(3 * i);
    const auto out = all_reduce_average(std::vector<Vector>(4, v));
    for (const Vector& w : out) CHECK(w == v);
  }
  SUBCASE("symmetric two-worker mean") {
    Vector a(2), b(2);
    a << 1.0, 3.0;
    b << 3.0, 1.0;
    const auto out = all_reduce_average({a, b});
    for (const Vector& w : out) {
      CHECK_EQ(w(0), 2.0);
      CHECK_EQ(w(1), 2.0);
    }
  }
  SUBCASE("random eight-worker mean matches the direct mean") {
    const auto vectors = random_vectors(8, 1000, 5);
    const Vector expected = direct_sum(vectors) / 8.0;
    for (const Vector& w : all_reduce_average(vectors)) {
      check_close(w, expected, 1e-12);
    }
  }
}

TEST_CASE("synchronous SGD step") {
  const int p = 4;
  const Eigen::Index d = 16;
  Vector w0(d);
  for (Eigen::Index i = 0; i < d; ++i) w0(i) = std::sin(double(i));
  std::vector<SgdState> states(p, {w0, 0.1});

  SUBCASE("zero gradients leave weights untouched") {
    const auto next =
        sgd_step(states, std::vector<Vector>(p, Vector::Zero(d)));
    for (const SgdState& s : next) CHECK(s.weights == w0);
  }
  SUBCASE("single worker is the plain update") {
    const auto grads = random_vectors(1, d, 8);
    const auto next = sgd_step({{w0, 0.1}}, grads);
    const Vector expected = w0 - 0.1 * grads[0];
    check_close(next[0].weights, expected, 1e-15);
  }
  SUBCASE("matches the direct mean update and keeps replicas identical") {
    const auto grads = random_vectors(p, d, 9);
    const Vector expected = w0 - 0.1 * (direct_sum(grads) / double(p));
    auto next = sgd_step(states, grads);
    for (const SgdState& s : next) {
      check_close(s.weights, expected, 1e-12);
      CHECK(s.weights == next.front().weights);
    }
    // Replicas stay bit-identical across further steps.
    for (int step = 0; step < 5; ++step) {
      next = sgd_step(next, random_vectors(p, d, 10 + std::uint64_t(step)));
      for (const SgdState& s : next) CHECK(s.weights == next.front().weights);
    }
  }
  SUBCASE("divergent replicas are rejected") {
    auto bad = states;
    bad[2].weights(3) += 1e-9;
    CHECK_THROWS_WITH_AS(
        sgd_step(bad, std::vector<Vector>(p, Vector::Zero(d))),
        doctest::Contains("replica divergence"), std::invalid_argument);
  }
}

TEST_CASE("fixed seeds reproduce bit-identical results") {
  const auto a = all_reduce_sum(random_vectors(8, 333, 4242));
  const auto b = all_reduce_sum(random_vectors(8, 333, 4242));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

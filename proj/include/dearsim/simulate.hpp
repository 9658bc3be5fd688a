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

#include "dearsim/task_graph.hpp"

namespace dearsim {

struct TimelineEvent {
  int task_id = 0;
  Resource resource = Resource::Compute;
  double start = 0.0;
  double end = 0.0;
};

struct Timeline {
  std::vector<TimelineEvent> events;  // sorted by (start, resource, task id)
  double iteration_seconds = 0.0;     // makespan
};

/// Deterministic list scheduling over one Compute and one Comm stream (the
/// single representative worker; collective durations already encode P).
/// A task becomes ready when all its deps complete (plus its release delay);
/// each stream runs one task at a time; among simultaneously-ready tasks the
/// lowest (issue_order, id) wins. Throws on cyclic graphs, naming the stuck
/// tasks.
Timeline simulate(const TaskGraph& graph);

/// Throws std::runtime_error if the timeline violates the schedule
/// invariants (duration mismatch, resource overlap, dependency order,
/// makespan mismatch).
void validate_timeline(const TaskGraph& graph, const Timeline& timeline);

double iteration_time(const ModelSpec& model, const PolicySpec& policy,
                      const ClusterSpec& cluster);

/// samples_per_iteration / iteration_time, in samples per second.
double throughput(const ModelSpec& model, const PolicySpec& policy,
                  const ClusterSpec& cluster, double samples_per_iteration);

}  // namespace dearsim

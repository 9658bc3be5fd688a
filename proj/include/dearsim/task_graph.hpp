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

#include <optional>
#include <string>
#include <vector>

#include "dearsim/cluster.hpp"
#include "dearsim/cost_model.hpp"
#include "dearsim/fusion.hpp"
#include "dearsim/model.hpp"
#include "dearsim/policy.hpp"

namespace dearsim {

enum class TaskKind {
  FeedForward,
  Backprop,
  ReduceScatter,
  AllGather,
  AllReduce,
  Negotiate,
  Barrier,
};

enum class Resource { Compute, Comm };

Resource resource_of(TaskKind kind);
std::string to_string(TaskKind kind);

struct Task {
  int id = 0;
  TaskKind kind = TaskKind::FeedForward;
  int subject = 0;   // layer index (per-layer tasks) or group id (fused tasks)
  bool group_subject = false;  // subject is a group id rather than a layer
  int part = 0;      // 1-based partition index for PriorityPartition, else 0
  double duration = 0.0;
  double release_delay = 0.0;  // extra latency after deps complete
  int issue_order = 0;  // dispatch priority among ready tasks, lower first
  std::vector<int> deps;
};

/// Dependency DAG for one steady-state iteration: backprop of iteration i,
/// gradient communication of iteration i, feed-forward of iteration i+1.
struct TaskGraph {
  std::vector<Task> tasks;  // tasks[i].id == i
  PolicySpec policy;
  ModelSpec model;
  ClusterSpec cluster;
  // Communication grouping (per-layer for unfused kinds); absent for
  // PriorityPartition, which splits rather than fuses.
  std::optional<FusionPlan> plan;
};

/// Emits the DAG for `policy` with task durations taken from the layer
/// compute times and the alpha-beta cost model.
TaskGraph build_graph(const ModelSpec& model, const PolicySpec& policy,
                      const ClusterSpec& cluster);

/// Label for timelines and traces, e.g. "BP l3", "RS g2", "AR l2 p1".
std::string task_label(const Task& task);

/// Zeroes the duration of every task of `kind`; used for the RS-only /
/// AG-only breakdown variants.
void zero_durations(TaskGraph& graph, TaskKind kind);

}  // namespace dearsim

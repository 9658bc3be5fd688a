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

#include "dearsim/task_graph.hpp"

#include <stdexcept>

namespace dearsim {

Resource resource_of(TaskKind kind) {
  switch (kind) {
    case TaskKind::FeedForward:
    case TaskKind::Backprop:
      return Resource::Compute;
    default:
      return Resource::Comm;
  }
}

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::FeedForward:
      return "FF";
    case TaskKind::Backprop:
      return "BP";
    case TaskKind::ReduceScatter:
      return "RS";
    case TaskKind::AllGather:
      return "AG";
    case TaskKind::AllReduce:
      return "AR";
    case TaskKind::Negotiate:
      return "NEGOTIATE";
    case TaskKind::Barrier:
      return "BARRIER";
  }
  throw std::logic_error("unreachable task kind");
}

std::string task_label(const Task& task) {
  if (task.kind == TaskKind::Barrier) return "BARRIER";
  std::string label = to_string(task.kind);
  label += task.group_subject ? " g" : " l";
  label += std::to_string(task.subject);
  if (task.part > 0) label += " p" + std::to_string(task.part);
  return label;
}

namespace {

class GraphBuilder {
 public:
  GraphBuilder(const ModelSpec& model, const PolicySpec& policy,
               const ClusterSpec& cluster)
      : model_(model), policy_(policy), cluster_(cluster) {}

  TaskGraph build() {
    validate(model_);
    validate(policy_);
    validate(cluster_);
    if (model_.layers.empty()) {
      throw std::invalid_argument("build_graph: empty model");
    }

    add_compute_chains();
    switch (policy_.kind) {
      case PolicyKind::Wfbp:
        add_wfbp(per_layer_plan(model_));
        break;
      case PolicyKind::WfbpFused:
        add_wfbp(build_fusion_plan(model_, policy_.fusion_buffer_bytes));
        break;
      case PolicyKind::Dear:
        add_dear(per_layer_plan(model_));
        break;
      case PolicyKind::DearFused:
        add_dear(build_fusion_plan(model_, policy_.fusion_buffer_bytes));
        break;
      case PolicyKind::PriorityPartition:
        add_priority_partition();
        break;
    }

    TaskGraph graph;
    graph.tasks = std::move(tasks_);
    graph.policy = policy_;
    graph.model = model_;
    graph.cluster = cluster_;
    graph.plan = std::move(plan_);
    return graph;
  }

 private:
  int add_task(TaskKind kind, int subject, bool group_subject, double duration,
               std::vector<int> deps, int issue_order, int part = 0,
               double release_delay = 0.0) {
    Task t;
    t.id = static_cast<int>(tasks_.size());
    t.kind = kind;
    t.subject = subject;
    t.group_subject = group_subject;
    t.part = part;
    t.duration = duration;
    t.release_delay = release_delay;
    t.issue_order = issue_order;
    t.deps = std::move(deps);
    tasks_.push_back(std::move(t));
    return tasks_.back().id;
  }

  const LayerSpec& layer(int l) const {
    return model_.layers[static_cast<std::size_t>(l - 1)];
  }

  // BP_L -> BP_{L-1} -> ... -> BP_1 and FF_1 -> FF_2 -> ... -> FF_L.
  void add_compute_chains() {
    const int L = model_.layer_count();
    bp_id_.assign(static_cast<std::size_t>(L) + 1, -1);
    ff_id_.assign(static_cast<std::size_t>(L) + 1, -1);
    int order = 0;
    for (int l = L; l >= 1; --l) {
      std::vector<int> deps;
      if (l < L) deps.push_back(bp_id_[static_cast<std::size_t>(l + 1)]);
      bp_id_[static_cast<std::size_t>(l)] =
          add_task(TaskKind::Backprop, l, false, layer(l).t_bp,
                   std::move(deps), order++);
    }
    for (int l = 1; l <= L; ++l) {
      std::vector<int> deps;
      if (l > 1) deps.push_back(ff_id_[static_cast<std::size_t>(l - 1)]);
      ff_id_[static_cast<std::size_t>(l)] =
          add_task(TaskKind::FeedForward, l, false, layer(l).t_ff,
                   std::move(deps), order++);
    }
  }

  std::vector<int> group_bp_deps(const FusionGroup& g) const {
    std::vector<int> deps;
    for (int l = g.high_layer; l >= g.low_layer; --l) {
      deps.push_back(bp_id_[static_cast<std::size_t>(l)]);
    }
    return deps;
  }

  void attach_ff_dep(int layer_index, int comm_task) {
    tasks_[static_cast<std::size_t>(
               ff_id_[static_cast<std::size_t>(layer_index)])]
        .deps.push_back(comm_task);
  }

  // One all-reduce per group, issued in gradient-readiness (plan) order.
  void add_wfbp(FusionPlan plan) {
    const bool per_layer = plan.buffer_bytes == 0;
    int order = 0;
    for (int gi = 0; gi < plan.group_count(); ++gi) {
      const FusionGroup& g = plan.groups[static_cast<std::size_t>(gi)];
      const double duration = all_reduce_time(
          static_cast<double>(group_bytes(model_, g)), cluster_);
      const int subject = per_layer ? g.high_layer : gi + 1;
      const int id = add_task(TaskKind::AllReduce, subject, !per_layer,
                              duration, group_bp_deps(g), order++);
      for (int l = g.low_layer; l <= g.high_layer; ++l) attach_ff_dep(l, id);
    }
    plan_ = std::move(plan);
  }

  // Reduce-scatter per group during backprop (plan order), one barrier over
  // all reduce-scatters, then all-gather per group in feed-forward order
  // (ascending lowest layer).
  void add_dear(FusionPlan plan) {
    int order = 0;
    std::vector<int> rs_ids;
    std::vector<double> ag_durations(
        static_cast<std::size_t>(plan.group_count()), 0.0);
    for (int gi = 0; gi < plan.group_count(); ++gi) {
      const FusionGroup& g = plan.groups[static_cast<std::size_t>(gi)];
      const double bytes = static_cast<double>(group_bytes(model_, g));
      ag_durations[static_cast<std::size_t>(gi)] =
          all_gather_time(bytes, cluster_);
      rs_ids.push_back(add_task(TaskKind::ReduceScatter, gi + 1, true,
                                reduce_scatter_time(bytes, cluster_),
                                group_bp_deps(g), order++));
    }
    int barrier = -1;
    if (!policy_.dear_group_dependency) {
      barrier = add_task(TaskKind::Barrier, 0, false, 0.0, rs_ids, order++);
    }
    for (int gi = plan.group_count() - 1; gi >= 0; --gi) {
      const FusionGroup& g = plan.groups[static_cast<std::size_t>(gi)];
      std::vector<int> deps{barrier >= 0
                                ? barrier
                                : rs_ids[static_cast<std::size_t>(gi)]};
      const int id = add_task(TaskKind::AllGather, gi + 1, true,
                              ag_durations[static_cast<std::size_t>(gi)],
                              std::move(deps), order++);
      for (int l = g.low_layer; l <= g.high_layer; ++l) attach_ff_dep(l, id);
    }
    plan_ = std::move(plan);
  }

  // Per-layer all-reduce split into ceil(size/partition_bytes) parts, each
  // preceded by a negotiation; issue priority is ascending layer (the order
  // feed-forward consumes them), preempting gradient-readiness order.
  void add_priority_partition() {
    const int L = model_.layer_count();
    int max_parts = 1;
    for (const LayerSpec& l : model_.layers) {
      const std::int64_t n =
          l.byte_size() == 0
              ? 1
              : (l.byte_size() + policy_.partition_bytes - 1) /
                    policy_.partition_bytes;
      max_parts = std::max<int>(max_parts, static_cast<int>(n));
    }
    const int stride = max_parts + 1;
    const double negotiate_seconds =
        static_cast<double>(policy_.negotiation_rounds) * 2.0 *
        (static_cast<double>(cluster_.workers) - 1.0) * cluster_.alpha;

    for (int l = L; l >= 1; --l) {
      const std::int64_t bytes = layer(l).byte_size();
      const int parts =
          bytes == 0 ? 1
                     : static_cast<int>((bytes + policy_.partition_bytes - 1) /
                                        policy_.partition_bytes);
      const double part_bytes =
          static_cast<double>(bytes) / static_cast<double>(parts);
      const double part_seconds = all_reduce_time(part_bytes, cluster_);
      for (int k = 0; k < parts; ++k) {
        const int issue = (l - 1) * stride + k;
        std::vector<int> ar_deps;
        double release = 0.0;
        if (policy_.negotiation_floating) {
          ar_deps = {bp_id_[static_cast<std::size_t>(l)]};
          release = negotiate_seconds;
        } else {
          const int neg = add_task(
              TaskKind::Negotiate, l, false, negotiate_seconds,
              {bp_id_[static_cast<std::size_t>(l)]}, issue, k + 1);
          ar_deps = {neg};
        }
        const int ar = add_task(TaskKind::AllReduce, l, false, part_seconds,
                                std::move(ar_deps), issue, k + 1, release);
        attach_ff_dep(l, ar);
      }
    }
  }

  const ModelSpec& model_;
  const PolicySpec& policy_;
  const ClusterSpec& cluster_;
  std::vector<Task> tasks_;
  std::vector<int> bp_id_;
  std::vector<int> ff_id_;
  std::optional<FusionPlan> plan_;
};

}  // namespace

TaskGraph build_graph(const ModelSpec& model, const PolicySpec& policy,
                      const ClusterSpec& cluster) {
  return GraphBuilder(model, policy, cluster).build();
}

void zero_durations(TaskGraph& graph, TaskKind kind) {
  for (Task& t : graph.tasks) {
    if (t.kind == kind) t.duration = 0.0;
  }
}

}  // namespace dearsim

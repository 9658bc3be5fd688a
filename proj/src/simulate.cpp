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

#include "dearsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace dearsim {

namespace {

void check_graph_shape(const TaskGraph& graph) {
  const int n = static_cast<int>(graph.tasks.size());
  for (int i = 0; i < n; ++i) {
    const Task& t = graph.tasks[static_cast<std::size_t>(i)];
    if (t.id != i) {
      throw std::invalid_argument("simulate: task ids must be 0..n-1 in order");
    }
    if (!(t.duration >= 0.0) || !std::isfinite(t.duration) ||
        !(t.release_delay >= 0.0)) {
      throw std::invalid_argument("simulate: task durations must be >= 0");
    }
    for (int dep : t.deps) {
      if (dep < 0 || dep >= n) {
        throw std::invalid_argument("simulate: dep out of range for task " +
                                    std::to_string(i));
      }
    }
  }
}

// Events driving the clock: a task completing (frees its stream, releases
// dependents) or a task becoming dispatchable. Completions at a given time
// are processed before ready events so zero-duration chains settle in order.
struct ClockEvent {
  double time;
  int type;  // 0 = completion, 1 = becomes ready
  int task;

  bool operator>(const ClockEvent& other) const {
    if (time != other.time) return time > other.time;
    if (type != other.type) return type > other.type;
    return task > other.task;
  }
};

}  // namespace

Timeline simulate(const TaskGraph& graph) {
  check_graph_shape(graph);
  const int n = static_cast<int>(graph.tasks.size());

  std::vector<int> remaining(static_cast<std::size_t>(n), 0);
  std::vector<double> dep_finish(static_cast<std::size_t>(n), 0.0);
  std::vector<std::vector<int>> dependents(static_cast<std::size_t>(n));
  for (const Task& t : graph.tasks) {
    remaining[static_cast<std::size_t>(t.id)] =
        static_cast<int>(t.deps.size());
    for (int dep : t.deps) {
      dependents[static_cast<std::size_t>(dep)].push_back(t.id);
    }
  }

  std::priority_queue<ClockEvent, std::vector<ClockEvent>,
                      std::greater<ClockEvent>>
      events;
  // Dispatchable tasks per stream, ordered by (issue_order, id).
  std::set<std::pair<int, int>> ready[2];
  int running[2] = {-1, -1};

  auto stream_of = [&](int task) {
    return static_cast<int>(resource_of(
        graph.tasks[static_cast<std::size_t>(task)].kind));
  };

  for (const Task& t : graph.tasks) {
    if (t.deps.empty()) events.push({t.release_delay, 1, t.id});
  }

  Timeline timeline;
  timeline.events.reserve(static_cast<std::size_t>(n));
  int completed = 0;

  while (!events.empty()) {
    const double now = events.top().time;
    // Drain everything scheduled for this instant before dispatching.
    while (!events.empty() && events.top().time == now) {
      const ClockEvent ev = events.top();
      events.pop();
      if (ev.type == 0) {
        running[stream_of(ev.task)] = -1;
        ++completed;
        for (int next : dependents[static_cast<std::size_t>(ev.task)]) {
          auto& left = remaining[static_cast<std::size_t>(next)];
          auto& finish = dep_finish[static_cast<std::size_t>(next)];
          finish = std::max(finish, now);
          if (--left == 0) {
            const Task& nt = graph.tasks[static_cast<std::size_t>(next)];
            events.push({finish + nt.release_delay, 1, next});
          }
        }
      } else {
        const Task& t = graph.tasks[static_cast<std::size_t>(ev.task)];
        ready[stream_of(ev.task)].insert({t.issue_order, t.id});
      }
    }
    for (int r = 0; r < 2; ++r) {
      if (running[r] != -1 || ready[r].empty()) continue;
      const auto best = *ready[r].begin();
      ready[r].erase(ready[r].begin());
      const Task& t = graph.tasks[static_cast<std::size_t>(best.second)];
      const double end = now + t.duration;
      running[r] = t.id;
      timeline.events.push_back(
          {t.id, static_cast<Resource>(r), now, end});
      events.push({end, 0, t.id});
    }
  }

  if (completed != n) {
    std::string stuck;
    for (const Task& t : graph.tasks) {
      if (remaining[static_cast<std::size_t>(t.id)] > 0) {
        if (!stuck.empty()) stuck += ", ";
        stuck += std::to_string(t.id);
      }
    }
    throw std::runtime_error("simulate: cycle detected involving tasks [" +
                             stuck + "]");
  }

  std::sort(timeline.events.begin(), timeline.events.end(),
            [](const TimelineEvent& a, const TimelineEvent& b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.resource != b.resource) return a.resource < b.resource;
              return a.task_id < b.task_id;
            });
  for (const TimelineEvent& ev : timeline.events) {
    timeline.iteration_seconds = std::max(timeline.iteration_seconds, ev.end);
  }
  validate_timeline(graph, timeline);
  return timeline;
}

void validate_timeline(const TaskGraph& graph, const Timeline& timeline) {
  const std::size_t n = graph.tasks.size();
  if (timeline.events.size() != n) {
    throw std::runtime_error("timeline: event count does not match tasks");
  }
  std::vector<const TimelineEvent*> by_task(n, nullptr);
  double makespan = 0.0;
  for (const TimelineEvent& ev : timeline.events) {
    if (ev.task_id < 0 || static_cast<std::size_t>(ev.task_id) >= n ||
        by_task[static_cast<std::size_t>(ev.task_id)] != nullptr) {
      throw std::runtime_error("timeline: bad or duplicate task event");
    }
    by_task[static_cast<std::size_t>(ev.task_id)] = &ev;
    const Task& t = graph.tasks[static_cast<std::size_t>(ev.task_id)];
    const double scale = std::max({1.0, std::abs(ev.end), std::abs(ev.start)});
    if (std::abs((ev.end - ev.start) - t.duration) > 1e-9 * scale) {
      throw std::runtime_error("timeline: event span != task duration");
    }
    if (ev.resource != resource_of(t.kind)) {
      throw std::runtime_error("timeline: event on the wrong resource");
    }
    makespan = std::max(makespan, ev.end);
  }
  if (makespan != timeline.iteration_seconds) {
    throw std::runtime_error("timeline: iteration_seconds != max event end");
  }
  // Dependencies: no event may start before every dep has ended.
  for (const TimelineEvent& ev : timeline.events) {
    const Task& t = graph.tasks[static_cast<std::size_t>(ev.task_id)];
    for (int dep : t.deps) {
      if (ev.start < by_task[static_cast<std::size_t>(dep)]->end) {
        throw std::runtime_error("timeline: task " +
                                 std::to_string(ev.task_id) +
                                 " starts before dep " + std::to_string(dep) +
                                 " ends");
      }
    }
  }
  // Exclusivity: events on one stream must not overlap.
  for (int r = 0; r < 2; ++r) {
    double prev_end = 0.0;
    for (const TimelineEvent& ev : timeline.events) {
      if (static_cast<int>(ev.resource) != r) continue;
      if (ev.start < prev_end) {
        throw std::runtime_error("timeline: overlapping events on one stream");
      }
      prev_end = ev.end;
    }
  }
}

double iteration_time(const ModelSpec& model, const PolicySpec& policy,
                      const ClusterSpec& cluster) {
  return simulate(build_graph(model, policy, cluster)).iteration_seconds;
}

double throughput(const ModelSpec& model, const PolicySpec& policy,
                  const ClusterSpec& cluster, double samples_per_iteration) {
  if (!(samples_per_iteration > 0.0)) {
    throw std::invalid_argument("throughput: samples_per_iteration must be > 0");
  }
  return samples_per_iteration / iteration_time(model, policy, cluster);
}

}  // namespace dearsim

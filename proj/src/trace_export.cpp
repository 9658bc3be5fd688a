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

#include "dearsim/trace_export.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dearsim {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

// RFC 4180: quote fields containing separators, quotes or newlines.
std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_double(const std::string& field) {
  std::size_t used = 0;
  const double value = std::stod(field, &used);
  if (used != field.size()) {
    throw std::invalid_argument("csv: bad numeric field '" + field + "'");
  }
  return value;
}

}  // namespace

nlohmann::json chrome_trace(const TaskGraph& graph, const Timeline& timeline) {
  nlohmann::json events = nlohmann::json::array();
  for (const char* stream : {"Compute", "Comm"}) {
    nlohmann::json meta;
    meta["name"] = "thread_name";
    meta["ph"] = "M";
    meta["pid"] = 0;
    meta["tid"] = stream == std::string("Compute") ? 0 : 1;
    meta["args"]["name"] = stream;
    events.push_back(meta);
  }
  for (const TimelineEvent& ev : timeline.events) {
    const Task& task = graph.tasks[static_cast<std::size_t>(ev.task_id)];
    nlohmann::json e;
    e["name"] = task_label(task);
    e["ph"] = "X";
    e["ts"] = ev.start * 1e6;
    e["dur"] = (ev.end - ev.start) * 1e6;
    e["pid"] = 0;
    e["tid"] = ev.resource == Resource::Compute ? 0 : 1;
    events.push_back(e);
  }
  nlohmann::json trace;
  trace["traceEvents"] = std::move(events);
  trace["displayTimeUnit"] = "ms";
  return trace;
}

std::string chrome_trace_string(const TaskGraph& graph,
                                const Timeline& timeline) {
  return chrome_trace(graph, timeline).dump(2);
}

std::string timeline_csv(const TaskGraph& graph, const Timeline& timeline) {
  std::ostringstream out;
  out << "task_id,label,resource,start_seconds,end_seconds\n";
  for (const TimelineEvent& ev : timeline.events) {
    const Task& task = graph.tasks[static_cast<std::size_t>(ev.task_id)];
    out << ev.task_id << ',' << csv_field(task_label(task)) << ','
        << (ev.resource == Resource::Compute ? "Compute" : "Comm") << ','
        << format_double(ev.start) << ',' << format_double(ev.end) << '\n';
  }
  return out.str();
}

namespace {

constexpr const char* kReportHeader =
    "policy,workers,t_ff,t_bp,t_rs,t_ag,t_ar,s_max,simulated_speedup,ratio,"
    "iteration_seconds";

}  // namespace

std::string reports_csv(const std::vector<SpeedupReport>& reports) {
  std::ostringstream out;
  out << kReportHeader << '\n';
  for (const SpeedupReport& r : reports) {
    out << csv_field(r.policy) << ',' << r.workers << ','
        << format_double(r.t_ff) << ',' << format_double(r.t_bp) << ','
        << format_double(r.t_rs) << ',' << format_double(r.t_ag) << ','
        << format_double(r.t_ar) << ',' << format_double(r.s_max) << ','
        << format_double(r.simulated_speedup) << ','
        << format_double(r.ratio) << ','
        << format_double(r.iteration_seconds) << '\n';
  }
  return out.str();
}

std::vector<SpeedupReport> parse_reports_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw std::invalid_argument("reports csv: unexpected header");
  }
  std::vector<SpeedupReport> reports;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 11) {
      throw std::invalid_argument("reports csv: expected 11 fields");
    }
    SpeedupReport r;
    r.policy = f[0];
    r.workers = static_cast<int>(parse_double(f[1]));
    r.t_ff = parse_double(f[2]);
    r.t_bp = parse_double(f[3]);
    r.t_rs = parse_double(f[4]);
    r.t_ag = parse_double(f[5]);
    r.t_ar = parse_double(f[6]);
    r.s_max = parse_double(f[7]);
    r.simulated_speedup = parse_double(f[8]);
    r.ratio = parse_double(f[9]);
    r.iteration_seconds = parse_double(f[10]);
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string reports_markdown(const std::vector<SpeedupReport>& reports) {
  std::ostringstream out;
  out << "| policy | P | t_ff | t_bp | t_rs | t_ag | t_ar | s_max | speedup "
         "| ratio | iteration |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
  char buffer[64];
  const auto g6 = [&buffer](double v) {
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return std::string(buffer);
  };
  for (const SpeedupReport& r : reports) {
    out << "| " << r.policy << " | " << r.workers << " | " << g6(r.t_ff)
        << " | " << g6(r.t_bp) << " | " << g6(r.t_rs) << " | " << g6(r.t_ag)
        << " | " << g6(r.t_ar) << " | " << g6(r.s_max) << " | "
        << g6(r.simulated_speedup) << " | " << g6(r.ratio) << " | "
        << g6(r.iteration_seconds) << " |\n";
  }
  return out.str();
}

std::string tuner_trace_csv(const TuneResult& result) {
  std::ostringstream out;
  out << "trial,x_bytes,throughput,cumulative_best\n";
  for (const TrialRecord& t : result.trace) {
    out << t.trial << ',' << format_double(t.buffer_bytes) << ','
        << format_double(t.throughput) << ','
        << format_double(t.cumulative_best) << '\n';
  }
  return out.str();
}

}  // namespace dearsim

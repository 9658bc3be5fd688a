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

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

#include "dearsim/analysis.hpp"
#include "dearsim/tuner.hpp"

namespace dearsim {

/// Chrome trace event format: one complete ("X") event per timeline event,
/// ts/dur in microseconds, pid 0, tid 0 for the Compute stream and 1 for
/// the Comm stream. Loadable in any trace viewer.
nlohmann::json chrome_trace(const TaskGraph& graph, const Timeline& timeline);
std::string chrome_trace_string(const TaskGraph& graph,
                                const Timeline& timeline);

/// CSV with columns task_id,label,resource,start_seconds,end_seconds.
std::string timeline_csv(const TaskGraph& graph, const Timeline& timeline);

/// CSV table of speedup reports. Doubles are printed with 17 significant
/// digits so parsing the table reproduces them bit-exactly.
std::string reports_csv(const std::vector<SpeedupReport>& reports);
std::vector<SpeedupReport> parse_reports_csv(const std::string& csv);

std::string reports_markdown(const std::vector<SpeedupReport>& reports);

/// CSV with columns trial,x_bytes,throughput,cumulative_best.
std::string tuner_trace_csv(const TuneResult& result);

/// 17-significant-digit representation that strtod round-trips exactly.
std::string format_double(double value);

}  // namespace dearsim

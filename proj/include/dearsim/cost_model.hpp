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

#include <utility>
#include <vector>

#include "dearsim/cluster.hpp"

namespace dearsim {

// Alpha-beta timing of ring collectives on P workers moving d bytes:
//
//   t_rs = t_ag = (P-1) * (alpha + (d/P) * beta)
//   t_ar = t_rs + t_ag
//
// d/P is real division; arithmetic (reduction compute) cost is omitted.
// All functions return 0 for a single worker.

enum class Collective { ReduceScatter, AllGather, AllReduce };

struct CollectiveTiming {
  Collective collective = Collective::AllReduce;
  double message_bytes = 0.0;
  double seconds = 0.0;
};

double reduce_scatter_time(double message_bytes, const ClusterSpec& cluster);
double all_gather_time(double message_bytes, const ClusterSpec& cluster);

/// Exactly reduce_scatter_time + all_gather_time (the decoupling is free;
/// the identity holds bit-for-bit).
double all_reduce_time(double message_bytes, const ClusterSpec& cluster);

/// Sequential all-reduce of n_parts equal parts of d/n bytes each;
/// equals all_reduce_time(d) + (n-1) * 2(P-1)alpha. Computed as the literal
/// sum over parts so that a simulated chain of part tasks matches it
/// bit-for-bit.
double partitioned_all_reduce_time(double message_bytes, int n_parts,
                                   const ClusterSpec& cluster);

CollectiveTiming time_collective(Collective collective, double message_bytes,
                                 const ClusterSpec& cluster);

struct Calibration {
  double alpha = 0.0;
  double beta = 0.0;
  bool clamped = false;  // a negative least-squares solution was clamped to 0
};

/// Least-squares fit of the all-reduce formula to measured
/// (message_bytes, seconds) points. With exactly two distinct sizes this is
/// the exact 2x2 solve. Requires >= 2 measurements with distinct sizes and
/// workers >= 2.
Calibration calibrate_alpha_beta(
    const std::vector<std::pair<double, double>>& measurements, int workers);

}  // namespace dearsim

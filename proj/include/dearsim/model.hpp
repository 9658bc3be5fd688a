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

#include <cstdint>
#include <string>
#include <vector>

namespace dearsim {

/// One learnable tensor. `index` is 1-based; index 1 is the input-side
/// layer, index L the output-side layer (the first one to finish
/// backpropagation).
struct LayerSpec {
  int index = 0;
  std::int64_t param_count = 0;
  int bytes_per_element = 4;
  double t_ff = 0.0;  // feed-forward compute seconds
  double t_bp = 0.0;  // backpropagation compute seconds

  std::int64_t byte_size() const { return param_count * bytes_per_element; }
};

struct ModelSpec {
  std::string name;
  std::vector<LayerSpec> layers;  // ordered by index, 1..L

  int layer_count() const { return static_cast<int>(layers.size()); }
  std::int64_t total_params() const;
  std::int64_t total_bytes() const;
  double total_ff_seconds() const;
  double total_bp_seconds() const;
};

/// Throws std::invalid_argument unless layer indices are exactly 1..L and
/// all counts/durations are non-negative.
void validate(const ModelSpec& model);

/// How synthetic presets spread parameters over tensors.
/// Uniform: equal share per tensor (up to integer remainders).
/// Imbalanced: 80% of the parameters in the last 20% of tensors, the shape
/// of CNN classifier heads.
enum class ParamProfile { Uniform, Imbalanced };

/// Builds a benchmark model by name. Total parameter count and tensor count
/// are fixed per preset; feed-forward time is spread uniformly over tensors
/// and t_bp = bp_to_ff_ratio * t_ff per tensor.
///
/// Known presets: resnet50 (161 tensors, 25.6M params), densenet201
/// (604, 20.0M), inceptionv4 (449, 42.7M), bert_base (206, 110.1M),
/// bert_large (398, 336.2M). Tensor counts are the learnable-tensor counts
/// of the reference models, which is the granularity gradients are
/// communicated at (coarser "layer" counts exist but are not used here).
ModelSpec preset_model(const std::string& name, double total_ff_seconds,
                       double bp_to_ff_ratio = 2.0,
                       ParamProfile profile = ParamProfile::Uniform);

const std::vector<std::string>& preset_names();

}  // namespace dearsim

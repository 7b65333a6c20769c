// Copyright 2026 The mmforge Authors
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
#include <span>
#include <string_view>

#include "mmforge/message_tree.hpp"

namespace mmforge {

enum class TaskKind { VideoCaption, Pointing, Other };

struct TaskLabelOptions {
  // Tracking answers are as long and dense as pointing answers.
  bool tracking_as_pointing = true;
};

// Maps a dataset/task label onto a weighting class; unknown labels are Other.
TaskKind task_kind_from_label(std::string_view label, const TaskLabelOptions& options = {});

// Fixed 0.1 for video captions and 0.2 for pointing; otherwise 4 / sqrt(n),
// correctly rounded to double.
double token_weight(TaskKind kind, std::int64_t answer_tokens);

// Sets each assistant message's weight from its own token count.
void assign_weights(Branch& branch, TaskKind kind);

// Shared per-device loss divisor: the mean loss-token count over devices.
double grad_scale(std::span<const std::int64_t> per_device_loss_tokens);

}  // namespace mmforge

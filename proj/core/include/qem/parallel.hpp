// Copyright 2026 The qem-lab Authors
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

#include <cstddef>
#include <functional>

namespace qem {

/// Worker count: QEM_LAB_THREADS if set and positive, else hardware threads.
std::size_t worker_count();

/**
 * Runs fn(i) for i in [0, count) on up to `workers` threads (0 means
 * worker_count()). The first exception thrown by any task is rethrown.
 */
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &fn,
                  std::size_t workers = 0);

}  // namespace qem

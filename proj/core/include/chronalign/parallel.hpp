// Copyright 2026 The chronalign Authors.
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

namespace chronalign {

// Worker count used by the row-parallel kernels. 0 selects all hardware
// threads. Every kernel partitions work into fixed-size chunks independent of
// this setting, so results do not depend on it.
void set_num_threads(std::size_t n);
std::size_t num_threads();
// The value last passed to set_num_threads, 0 meaning all cores.
std::size_t thread_setting();

// Calls fn(chunk_begin, chunk_end) for consecutive chunks of `grain` items
// covering [0, n). Chunks may run concurrently; each runs exactly once.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace chronalign

// Copyright 2026 The Biphoton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BIPHOTON_PARALLEL_H
#define BIPHOTON_PARALLEL_H

#include <cstddef>
#include <functional>

namespace biphoton {

/// Runs body(begin, end) over contiguous chunks of [0, count) on up to
/// `threads` worker threads (0 = hardware concurrency). Chunk boundaries
/// depend only on `count` and the worker count, never on timing. The first
/// exception thrown by any chunk is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t, std::size_t)> &body);

unsigned resolve_thread_count(unsigned requested);

}  // namespace biphoton

#endif

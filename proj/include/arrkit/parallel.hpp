// Copyright 2026-present the arrkit project
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

namespace arrkit::parallel {

/// Process-wide worker count. Starts at 1 unless the ARRKIT_THREADS
/// environment variable says otherwise; the CLI --threads flag overrides.
int thread_count();
void set_thread_count(int threads);

// Runs fn(begin, end) over disjoint chunks of [0, n). Work is partitioned
// by chunk index, never by thread scheduling, so any result written per
// index is identical for every thread count. fn must not throw.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace arrkit::parallel

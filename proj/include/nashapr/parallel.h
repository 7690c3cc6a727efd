// Copyright 2026 The NashApr Authors
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

#ifndef NASHAPR_PARALLEL_H_
#define NASHAPR_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace nashapr {

// Environment variable holding the worker thread count. "0" selects the
// strict single-threaded mode; unset means one thread per hardware core.
inline constexpr const char* kThreadsEnvVar = "NASHAPR_THREADS";

// Worker count implied by kThreadsEnvVar, at least 1.
int ThreadCount();

// Calls body(k) for every k in [0, count). Work is split into contiguous
// chunks across ThreadCount() threads; body must only write to state owned
// by index k.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nashapr

#endif  // NASHAPR_PARALLEL_H_

// SPDX-License-Identifier: Apache-2.0
//
// chanforge: MIMO channel synthesis from per-ray propagation data
// Copyright (C) 2026 The chanforge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace chanforge
{

// True when CHANFORGE_NO_PARALLEL=1 is set in the environment.
bool parallel_disabled_by_env();

// Thread count actually used for a request of `requested` jobs (>= 1; 1 when disabled by env).
int effective_jobs(int requested);

// Runs fn(i) for every i in [0, n) on up to `jobs` threads. Iterations must write to disjoint
// state. Exceptions are rethrown on the calling thread; if several iterations throw, the one with
// the lowest index wins so the reported error does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn &&fn)
{
    const int threads = effective_jobs(jobs);
    if (threads <= 1 || n < 2)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (long long i = 0; i < count; ++i)
    {
        try
        {
            fn(static_cast<std::size_t>(i));
        }
        catch (...)
        {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace chanforge

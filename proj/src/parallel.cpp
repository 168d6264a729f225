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

#include "chanforge/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string_view>

namespace chanforge
{

bool parallel_disabled_by_env()
{
    const char *v = std::getenv("CHANFORGE_NO_PARALLEL");
    return v != nullptr && std::string_view(v) == "1";
}

int effective_jobs(int requested)
{
    if (parallel_disabled_by_env())
        return 1;
    return std::max(1, requested);
}

} // namespace chanforge

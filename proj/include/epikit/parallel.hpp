// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>

namespace epikit {

// Worker count: EPIKIT_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
// visited by exactly one worker, so writes to per-index slots are race free.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 256);

}  // namespace epikit

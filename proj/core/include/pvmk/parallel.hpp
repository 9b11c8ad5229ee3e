#pragma once

#include <cstddef>
#include <functional>

namespace pvmk {

/// Worker count: PVMK_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Callers
/// write results into per-index slots so the reduction order stays fixed.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pvmk

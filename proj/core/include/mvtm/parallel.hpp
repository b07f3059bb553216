#pragma once

#include <cstdint>
#include <functional>

namespace mvtm {

/// Worker count honoring the MVTM_THREADS environment variable
/// (unset or 0 means hardware concurrency).
int resolved_thread_count();

/// Runs fn(i) for i in [0, count) across the resolved worker count.
/// Callers own determinism: fn must write only to slot i of preallocated
/// storage, so the result is independent of the schedule.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace mvtm

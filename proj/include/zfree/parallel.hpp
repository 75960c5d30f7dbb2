#pragma once

#include <cstddef>
#include <functional>

namespace zfree {

/// Number of worker threads used for data-parallel grid evaluation.
/// Defaults to 1; results never depend on this value.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Chunks are statically assigned so the
/// work split is deterministic; body must only write to slot i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace zfree

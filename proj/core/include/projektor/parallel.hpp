#pragma once

#include <cstddef>
#include <functional>

namespace projektor {

// Hardware concurrency, capped by PROJEKTOR_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, n). Work is split statically so results written by index are
// independent of the thread count. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace projektor

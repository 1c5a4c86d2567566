#pragma once

#include <cstddef>
#include <functional>

namespace privmia {

// PRIVMIA_WORKERS when set, else hardware concurrency, floor 1.
int default_worker_count();

// Runs fn(i) for i in [0, n) across up to `workers` threads. Tasks must be
// independent and write only to their own output slots, so results never
// depend on the worker count. The first exception thrown is rethrown on the
// calling thread after all workers join.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace privmia

#pragma once

#include <functional>

namespace defc {

// Worker count: DEFC_THREADS if set and positive, else the hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. The first
// exception thrown by any task is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace defc

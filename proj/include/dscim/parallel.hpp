#pragma once

#include <functional>

namespace dscim {

/// Worker count: explicit set_thread_count() wins, else DSCIM_THREADS, else
/// hardware concurrency.
int thread_count();
void set_thread_count(int n);  // n <= 0 restores the default

/// Runs fn(i) for i in [0, n). Each index must write only its own output
/// slot; with that discipline results are identical for any thread count.
void parallel_for(long long n, const std::function<void(long long)>& fn);

}  // namespace dscim

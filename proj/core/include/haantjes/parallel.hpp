#pragma once

#include <functional>

namespace haantjes {

/// Worker count: HAANTJES_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Results
/// must be written to per-index slots; the lowest-index exception, if any, is
/// rethrown after all workers finish.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace haantjes

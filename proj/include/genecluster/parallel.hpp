#ifndef GENECLUSTER_PARALLEL_HPP
#define GENECLUSTER_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace genecluster {

/// Number of worker threads for internal parallel loops. Controlled by the
/// GENECLUSTER_THREADS environment variable (0 or unset = hardware
/// concurrency).
std::size_t worker_count();

/// Runs fn(begin, end) over disjoint chunks of [0, n), possibly on several
/// threads. Chunk boundaries depend on the thread count, so fn must produce
/// results that are independent of the chunking (e.g. writes to disjoint
/// indices, or reductions combined through a total order).
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace genecluster

#endif  // GENECLUSTER_PARALLEL_HPP

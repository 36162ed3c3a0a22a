#ifndef GOAL_PARALLEL_HPP
#define GOAL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace goal {

/// Name of the environment variable that caps worker threads.
inline constexpr const char* kWorkersEnv = "GOAL_NUM_THREADS";

/// GOAL_NUM_THREADS if set to a positive integer, else hardware concurrency
/// (at least 1).
unsigned default_workers();

/// Calls body(i) for i in [0, count) on up to `workers` threads. Tasks are
/// claimed dynamically; the first exception thrown is rethrown after all
/// threads join.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace goal

#endif  // GOAL_PARALLEL_HPP

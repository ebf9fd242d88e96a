#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

namespace fredlab {

/// Worker count from a "--threads" value ("auto" or a positive integer). When
/// the flag is absent the THREADS environment variable is consulted, then
/// "auto". "auto" means std::thread::hardware_concurrency(), at least 1.
int resolve_threads(const std::optional<std::string>& flag);

/// Parses "auto" or a positive integer; throws std::invalid_argument otherwise.
int parse_threads(const std::string& value);

/// Runs task(i) for i in [0, n) on up to `threads` workers. Tasks are handed
/// out by an atomic counter, so each task must write only to its own slot.
/// The first exception thrown by a task is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task);

}  // namespace fredlab

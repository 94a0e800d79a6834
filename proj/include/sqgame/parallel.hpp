#pragma once

#include <cstddef>
#include <functional>

namespace sqgame {

/// Worker count: hardware concurrency, capped by SQGAME_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Work is split
/// into contiguous index blocks so results written per index are independent
/// of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sqgame

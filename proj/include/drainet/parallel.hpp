#ifndef DRAINET_PARALLEL_HPP
#define DRAINET_PARALLEL_HPP

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "drainet/common.hpp"

namespace drainet {

// Worker count: hardware concurrency capped by DRAINET_THREADS.
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("DRAINET_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit >= 1 && limit < n) n = limit;
  }
  return n;
}

// Runs body(replica_index) for indices [0, n). Each replica derives its own
// seed and writes to its own slot, and aggregation happens afterwards in
// index order, so results do not depend on the worker count.
template <class Body>
void parallel_replicas(i64 n, const Body& body) {
  const int workers = n < 2 ? 1 : worker_count();
  if (workers == 1) {
    for (i64 r = 0; r < n; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (i64 r = w; r < n; r += workers) body(r);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace drainet

#endif

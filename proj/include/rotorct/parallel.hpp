#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace rotorct {

/// Worker count: hardware concurrency capped by the ROTORCT_THREADS env var.
inline int worker_count() {
    int n = int(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("ROTORCT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

/// Static block partition of [0, n); body(i) must be independent across i.
/// Results keep deterministic ordering because each index owns its output slot.
template <class Body>
void parallel_for(int n, Body&& body) {
    const int nw = std::min(worker_count(), n);
    if (nw <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        const int lo = int(std::int64_t(n) * w / nw);
        const int hi = int(std::int64_t(n) * (w + 1) / nw);
        pool.emplace_back([lo, hi, &body] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace rotorct

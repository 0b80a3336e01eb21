#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace torque::detail {

inline int worker_count()
{
    if (const char* env = std::getenv("TORQUE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(y) for y in [0, rows). Rows are split into contiguous blocks, so
// results are deterministic as long as fn writes only to its own rows.
template <class Fn>
void parallel_rows(int rows, Fn&& fn)
{
    const int workers = std::min(worker_count(), rows);
    if (workers <= 1) {
        for (int y = 0; y < rows; ++y)
            fn(y);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const int chunk = (rows + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int y0 = w * chunk;
        const int y1 = std::min(y0 + chunk, rows);
        if (y0 >= y1)
            break;
        threads.emplace_back([y0, y1, &fn] {
            for (int y = y0; y < y1; ++y)
                fn(y);
        });
    }
    for (auto& t : threads)
        t.join();
}

} // namespace torque::detail

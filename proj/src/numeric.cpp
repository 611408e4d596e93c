#include "msim/numeric.hpp"

#include <algorithm>
#include <atomic>

namespace msim {

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned nthreads = static_cast<unsigned>(
        std::min<std::size_t>(workers, n));
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (unsigned t = 0; t + 1 < nthreads; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

double parallel_reduce(std::size_t n, unsigned workers,
                       const std::function<double(std::size_t, std::size_t)>& chunk_fn) {
    const std::size_t nchunks = std::min<std::size_t>(kReductionChunks, std::max<std::size_t>(n, 1));
    std::vector<double> partial(nchunks, 0.0);
    parallel_for(nchunks, workers, [&](std::size_t c) {
        const std::size_t begin = n * c / nchunks;
        const std::size_t end = n * (c + 1) / nchunks;
        partial[c] = chunk_fn(begin, end);
    });
    CompensatedSum acc;
    for (double p : partial) acc.add(p);
    return acc.value();
}

} // namespace msim

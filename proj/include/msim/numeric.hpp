// numeric.hpp
// Compensated summation and a fixed-chunk parallel map, the two primitives
// that keep every enumeration and sampling reduction bitwise reproducible
// regardless of worker count.

#pragma once

#include <cstddef>
#include <complex>
#include <functional>
#include <thread>
#include <vector>

namespace msim {

using cplx = std::complex<double>;

// Neumaier variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(const std::vector<double>& xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

// Number of fixed chunks used by parallel reductions.  Constant (never a
// function of the worker count) so that partial-sum combination order, and
// hence every floating-point result, is identical at any worker count.
inline constexpr std::size_t kReductionChunks = 64;

// Runs fn(i) for i in [0, n).  Work is split into contiguous chunks handed to
// `workers` threads; fn must only write to slots it owns.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

// Fixed-chunk compensated reduction: [0, n) is cut into kReductionChunks
// contiguous ranges; `chunk_fn(begin, end)` returns the chunk's compensated
// partial sum and partials are combined in chunk order.
double parallel_reduce(std::size_t n, unsigned workers,
                       const std::function<double(std::size_t, std::size_t)>& chunk_fn);

} // namespace msim

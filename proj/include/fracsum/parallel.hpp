#pragma once

// OpenMP helpers with one hard rule: results never depend on the worker count.
// Parallel regions only fill independent slots (per-trial, per-block); any
// reduction is a serial fold over those slots in a fixed order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fracsum::par {

inline int max_workers() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Map a requested worker count to an effective one (<=0 means "all").
inline int resolve_workers(int requested) noexcept {
    if (requested <= 0) return max_workers();
    return requested;
}

/// Run body(i) for i in [0, count). Iterations must be independent.
template <class Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
    workers = resolve_workers(workers);
#ifdef _OPENMP
    if (workers > 1 && count > 1) {
        const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for num_threads(workers) schedule(static)
        for (std::int64_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < count; ++i) body(i);
}

/// Block size for deterministic summation. Partial sums are computed per block
/// (possibly in parallel) and folded serially in block order, so the result is
/// bitwise identical for any worker count.
inline constexpr std::size_t kSumBlock = std::size_t{1} << 12;

/// Sum of term(i) for i in [0, count), worker-count independent.
template <class Term>
double block_sum(std::size_t count, int workers, Term&& term) {
    if (count == 0) return 0.0;
    const std::size_t nblocks = (count + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nblocks, 0.0);
    parallel_for(nblocks, workers, [&](std::size_t b) {
        const std::size_t lo = b * kSumBlock;
        const std::size_t hi = lo + kSumBlock < count ? lo + kSumBlock : count;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[b] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

inline double block_sum(std::span<const double> values, int workers) {
    return block_sum(values.size(), workers, [&](std::size_t i) { return values[i]; });
}

/// Plain left-to-right sum; the reference the blocked version is tested against.
inline double sum_serial(std::span<const double> values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
}

template <class Term>
double sum_serial_f(std::size_t count, Term&& term) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += term(i);
    return acc;
}

}  // namespace fracsum::par

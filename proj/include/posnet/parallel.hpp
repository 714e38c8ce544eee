#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace posnet {

// Parallel loops in this project are maps over independent output slots:
// each slot is written by exactly one thread, so results are bitwise
// identical to the serial path regardless of thread count or schedule.

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) fn(i);
#else
    for (std::int64_t i = 0; i < n; ++i) fn(i);
#endif
}

template <typename Fn>
void serial_for(std::int64_t n, Fn&& fn) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace posnet

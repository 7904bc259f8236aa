#ifndef FFHARM_REDUCE_HPP
#define FFHARM_REDUCE_HPP

#include <complex>
#include <cstdint>

namespace ffharm {

// Reductions use a fixed index order: sequential below the threshold, pairwise
// (tree) splitting above it. The tree depends only on the length, so results
// are identical run to run and independent of the thread schedule.
inline constexpr std::int64_t kPairwiseThreshold = 1024;

namespace detail {

template <class T, class F>
T tree_sum_range(std::int64_t lo, std::int64_t hi, F& term) {
    if (hi - lo < kPairwiseThreshold) {
        T acc{};
        for (std::int64_t i = lo; i < hi; ++i) acc += term(i);
        return acc;
    }
    const std::int64_t mid = lo + (hi - lo) / 2;
    return tree_sum_range<T>(lo, mid, term) + tree_sum_range<T>(mid, hi, term);
}

}  // namespace detail

template <class F>
std::complex<double> tree_sum(std::int64_t n, F&& term) {
    return detail::tree_sum_range<std::complex<double>>(0, n, term);
}

template <class F>
double tree_sum_real(std::int64_t n, F&& term) {
    return detail::tree_sum_range<double>(0, n, term);
}

inline std::complex<double> tree_sum(const std::complex<double>* data, std::int64_t n) {
    return tree_sum(n, [data](std::int64_t i) { return data[i]; });
}

}  // namespace ffharm

#endif

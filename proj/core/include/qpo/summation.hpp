#pragma once

#include <cstddef>
#include <span>

#include "qpo/xreal.hpp"

namespace qpo {

// Pairwise (tree) summation: worst-case error grows like log2(n) * eps
// instead of n * eps, which matters for the 1e6..4e6 term sums used here.
namespace detail {

inline constexpr std::size_t kPairwiseLeaf = 32;

template <typename T>
T pairwise_sum_impl(std::span<const T> v) {
    if (v.size() <= kPairwiseLeaf) {
        T acc{};
        for (const T& x : v) acc += x;
        return acc;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum_impl(v.first(half)) + pairwise_sum_impl(v.subspan(half));
}

template <typename T>
T pairwise_weighted_sum_impl(std::span<const XReal> w, std::span<const T> f) {
    if (w.size() <= kPairwiseLeaf) {
        T acc{};
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * f[i];
        return acc;
    }
    std::size_t half = w.size() / 2;
    return pairwise_weighted_sum_impl(w.first(half), f.first(half)) +
           pairwise_weighted_sum_impl(w.subspan(half), f.subspan(half));
}

}  // namespace detail

inline XReal pairwise_sum(std::span<const XReal> v) {
    return detail::pairwise_sum_impl(v);
}
inline XComplex pairwise_sum(std::span<const XComplex> v) {
    return detail::pairwise_sum_impl(v);
}

// sum of w[i] * f[i] without materializing the products.
inline XReal pairwise_weighted_sum(std::span<const XReal> w, std::span<const XReal> f) {
    return detail::pairwise_weighted_sum_impl(w, f);
}
inline XComplex pairwise_weighted_sum(std::span<const XReal> w,
                                      std::span<const XComplex> f) {
    return detail::pairwise_weighted_sum_impl(w, f);
}

}  // namespace qpo

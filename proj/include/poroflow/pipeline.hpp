#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"
#include "poroflow/kalman.hpp"
#include "poroflow/ncdf.hpp"

namespace poroflow {

// Uniform dispatch over the four compared methods: the median baseline,
// each cascade stage alone, and the full Kalman -> NCDF cascade.
//
// Note the median baseline here runs directly on the noisy strain grid;
// elastography pipelines often median-filter the displacement image before
// differentiation, but displacement estimation is out of scope.

enum class FilterTag { median, kalman, ncdf, proposed };

inline const char* filter_tag_name(FilterTag tag) {
    switch (tag) {
        case FilterTag::median: return "median";
        case FilterTag::kalman: return "kalman";
        case FilterTag::ncdf: return "ncdf";
        case FilterTag::proposed: return "proposed";
    }
    throw ConfigError("unknown filter tag");
}

inline FilterTag parse_filter_tag(const std::string& name) {
    if (name == "median") return FilterTag::median;
    if (name == "kalman") return FilterTag::kalman;
    if (name == "ncdf") return FilterTag::ncdf;
    if (name == "proposed") return FilterTag::proposed;
    throw ConfigError("unknown filter method '" + name +
                      "' (valid: median, kalman, ncdf, proposed)");
}

struct FilterMethod {
    FilterTag tag = FilterTag::proposed;
    KalmanConfig kalman_cfg{};
    NcdfConfig ncdf_cfg{};
    int median_size = 5;

    void validate() const {
        if (median_size < 3 || median_size % 2 == 0)
            throw ConfigError("median_size must be odd and >= 3");
        kalman_cfg.validate();
        ncdf_cfg.validate();
    }
};

namespace detail {

/// Comparator list of a sorting network, generated at compile time.
struct SortingNet {
    std::array<std::pair<int, int>, 1024> pairs{};
    int count = 0;
};

constexpr int next_pow2(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

/// Batcher odd-even mergesort on next_pow2(n) channels. Channels >= n hold
/// conceptual +inf padding, so comparators touching them are no-ops and are
/// dropped; the rest sort any n-element input.
constexpr SortingNet batcher_network(int n) {
    SortingNet net{};
    const int padded = next_pow2(n);
    for (int p = 1; p < padded; p *= 2)
        for (int k = p; k >= 1; k /= 2)
            for (int j = k % p; j + k < padded; j += 2 * k)
                for (int i = 0; i < k; ++i)
                    if ((i + j) / (2 * p) == (i + j + k) / (2 * p) && i + j + k < n)
                        net.pairs[net.count++] = {i + j, i + j + k};
    return net;
}

/// Keep only comparators that can influence channel `out`, walking backward
/// and growing the needed set; dropped comparators write channels the kept
/// suffix never reads.
constexpr SortingNet prune_to_output(const SortingNet& net, int out) {
    bool needed[64] = {};
    needed[out] = true;
    std::array<int, 1024> keep{};
    int nkeep = 0;
    for (int c = net.count - 1; c >= 0; --c) {
        const auto pr = net.pairs[c];
        if (needed[pr.first] || needed[pr.second]) {
            keep[nkeep++] = c;
            needed[pr.first] = true;
            needed[pr.second] = true;
        }
    }
    SortingNet kept{};
    for (int k = nkeep - 1; k >= 0; --k) kept.pairs[kept.count++] = net.pairs[keep[k]];
    return kept;
}

/// Median of kN values through the pruned network, fully unrolled into
/// branchless min/max pairs. Verified exhaustively over 0-1 inputs in the
/// tests, which by the 0-1 principle covers all real inputs.
template <int kN>
inline double network_median(std::array<double, kN> w) {
    static_assert(kN >= 1 && kN <= 64 && kN % 2 == 1);
    constexpr SortingNet kNet = prune_to_output(batcher_network(kN), kN / 2);
    [&]<std::size_t... K>(std::index_sequence<K...>) {
        ((void)([&] {
            constexpr auto pr = kNet.pairs[K];
            const double a = w[pr.first];
            const double b = w[pr.second];
            w[pr.first] = std::min(a, b);
            w[pr.second] = std::max(a, b);
        }()),
         ...);
    }(std::make_index_sequence<static_cast<std::size_t>(kNet.count)>{});
    return w[kN / 2];
}

template <int kSize>
inline void median_rows_fixed(const ScalarGrid& g, ScalarGrid& out) {
    constexpr int radius = kSize / 2;
    const auto rows = static_cast<std::ptrdiff_t>(g.rows());
    const auto cols = static_cast<std::ptrdiff_t>(g.cols());
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const double* rowp[kSize];
        for (int di = -radius; di <= radius; ++di) {
            const auto ci = std::min(std::max<std::ptrdiff_t>(i + di, 0), rows - 1);
            rowp[di + radius] = &g(static_cast<std::size_t>(ci), 0);
        }
        for (std::ptrdiff_t j = 0; j < cols; ++j) {
            std::array<double, kSize * kSize> w;
            int n = 0;
            for (int dj = -radius; dj <= radius; ++dj) {
                const auto cj = std::min(std::max<std::ptrdiff_t>(j + dj, 0), cols - 1);
                for (int r = 0; r < kSize; ++r) w[n++] = rowp[r][cj];
            }
            out(i, static_cast<std::size_t>(j)) = network_median<kSize * kSize>(w);
        }
    }
}

inline void median_rows_dynamic(const ScalarGrid& g, int size, ScalarGrid& out) {
    const int radius = size / 2;
    std::vector<double> window(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
    const auto rows = static_cast<std::ptrdiff_t>(g.rows());
    const auto cols = static_cast<std::ptrdiff_t>(g.cols());
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::ptrdiff_t j = 0; j < cols; ++j) {
            std::size_t n = 0;
            for (int di = -radius; di <= radius; ++di)
                for (int dj = -radius; dj <= radius; ++dj)
                    window[n++] = g.at_clamped(i + di, j + dj);
            auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
            std::nth_element(window.begin(), mid, window.end());
            out(i, j) = *mid;
        }
}

}  // namespace detail

/// Per-pixel median of the size x size replicate-padded neighborhood.
inline ScalarGrid median_filter(const ScalarGrid& g, int size) {
    if (size < 1 || size % 2 == 0)
        throw ConfigError("median window size must be odd and positive, got " +
                          std::to_string(size));
    ScalarGrid out(g.rows(), g.cols());
    switch (size) {
        case 3: detail::median_rows_fixed<3>(g, out); break;
        case 5: detail::median_rows_fixed<5>(g, out); break;
        case 7: detail::median_rows_fixed<7>(g, out); break;
        default: detail::median_rows_dynamic(g, size, out); break;
    }
    return out;
}

inline ScalarGrid apply_filter(const ScalarGrid& g, const FilterMethod& method) {
    method.validate();
    switch (method.tag) {
        case FilterTag::median:
            return median_filter(g, method.median_size);
        case FilterTag::kalman:
            return apply_kalman(g, method.kalman_cfg);
        case FilterTag::ncdf:
            return run_ncdf(g, method.ncdf_cfg).image;
        case FilterTag::proposed:
            return run_ncdf(apply_kalman(g, method.kalman_cfg), method.ncdf_cfg).image;
    }
    throw ConfigError("unknown filter tag");
}

}  // namespace poroflow

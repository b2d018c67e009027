#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "poroflow/grid.hpp"

namespace testutil {

inline poroflow::ScalarGrid random_grid(std::size_t rows, std::size_t cols,
                                        std::uint64_t seed, double lo = -1.0,
                                        double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    poroflow::ScalarGrid g(rows, cols);
    for (double& v : g.data()) v = dist(rng);
    return g;
}

inline poroflow::ScalarGrid gaussian_noise_grid(std::size_t rows, std::size_t cols,
                                                std::uint64_t seed, double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    poroflow::ScalarGrid g(rows, cols);
    for (double& v : g.data()) v = dist(rng);
    return g;
}

inline double mse(const poroflow::ScalarGrid& a, const poroflow::ScalarGrid& b) {
    double acc = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double d = a.data()[n] - b.data()[n];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

inline double max_abs_diff(const poroflow::ScalarGrid& a, const poroflow::ScalarGrid& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        m = std::max(m, std::abs(a.data()[n] - b.data()[n]));
    return m;
}

inline double total_variation(const poroflow::ScalarGrid& g) {
    double tv = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j + 1 < g.cols(); ++j)
            tv += std::abs(g(i, j + 1) - g(i, j));
    for (std::size_t i = 0; i + 1 < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            tv += std::abs(g(i + 1, j) - g(i, j));
    return tv;
}

}  // namespace testutil

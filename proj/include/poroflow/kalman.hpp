#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"

namespace poroflow {

// Step I of the cascade: a recursive scalar Kalman smoother run
// left-to-right along each row (the lateral direction). Measurement noise
// is the global variance of the noisy elastogram; process noise per step
// is the squared difference of Gaussian-weighted block means of adjacent
// columns.

struct KalmanConfig {
    int window_wk = 13;          // exposed tuning window; drives the optional detrend
    int block_size = 3;          // block for the local means feeding sigma_r^2
    double block_kernel_sigma = 0.6;
    bool enable_detrend = false;  // subtract a moving-average trend of width
                                  // window_wk before the recursion, add it back after

    void validate() const {
        if (window_wk < 3 || window_wk % 2 == 0)
            throw ConfigError("window_wk must be odd and >= 3");
        if (block_size < 3 || block_size % 2 == 0)
            throw ConfigError("block_size must be odd and >= 3");
        if (!(block_kernel_sigma > 0.0))
            throw ConfigError("block_kernel_sigma must be positive");
    }
};

/// Per-pixel trace of the recursion, exposed for invariant checks.
struct KalmanStepTrace {
    double gain = 0.0;
    double q_prior = 0.0;
    double q_post = 0.0;
};

namespace detail {
// Degenerate all-zero process noise would freeze the filter on constant
// regions; the floor keeps the gain well-defined without affecting
// results above machine noise.
constexpr double kSigmaR2Floor = 1e-20;
}  // namespace detail

/// Population variance of the whole elastogram, used as the measurement
/// noise variance at every pixel.
inline double estimate_sigma_g2(const ScalarGrid& noisy) {
    if (noisy.size() < 2)
        throw DomainError("estimate_sigma_g2 needs at least 2 pixels");
    return grid_variance(noisy);
}

/// Gaussian-weighted mean of the block_size x block_size block centered at
/// (i, j), replicate boundaries: weights exp(-(di^2+dj^2)/2 sigma^2)
/// normalized over the block. Agrees with gaussian_smooth(grid, block_size,
/// block_kernel_sigma) at that pixel up to rounding.
inline double block_mean(const ScalarGrid& g, std::size_t i, std::size_t j,
                         const KalmanConfig& cfg) {
    cfg.validate();
    const int radius = cfg.block_size / 2;
    const double inv_two_s2 =
        1.0 / (2.0 * cfg.block_kernel_sigma * cfg.block_kernel_sigma);
    double acc = 0.0;
    double weight_sum = 0.0;
    for (int di = -radius; di <= radius; ++di)
        for (int dj = -radius; dj <= radius; ++dj) {
            const double w = std::exp(-(di * di + dj * dj) * inv_two_s2);
            weight_sum += w;
            acc += w * g.at_clamped(static_cast<std::ptrdiff_t>(i) + di,
                                    static_cast<std::ptrdiff_t>(j) + dj);
        }
    return acc / weight_sum;
}

/// Process-noise variance at (i, j): (mu_{j-1} - mu_j)^2 of the local
/// block means. Defined for j >= 1 only; the first column initializes the
/// recursion instead.
inline double estimate_sigma_r2(const ScalarGrid& noisy, std::size_t i, std::size_t j,
                                const KalmanConfig& cfg) {
    if (j == 0)
        throw DomainError("sigma_r^2 is undefined at the first column");
    if (i >= noisy.rows() || j >= noisy.cols())
        throw DimensionError("estimate_sigma_r2: pixel outside grid");
    const double mu_prev = block_mean(noisy, i, j - 1, cfg);
    const double mu_cur = block_mean(noisy, i, j, cfg);
    const double d = mu_prev - mu_cur;
    return d * d;
}

/// One row of the recursion. sigma_r2[j-1] supplies the process noise for
/// the step into column j. Fills `trace` (if non-null) with per-step gain
/// and variances, including the j = 0 initialization.
inline std::vector<double> kalman_row(const std::vector<double>& row,
                                      const std::vector<double>& sigma_r2,
                                      double sigma_g2,
                                      std::vector<KalmanStepTrace>* trace = nullptr) {
    if (row.size() < 2) throw DimensionError("kalman_row needs at least 2 samples");
    if (sigma_r2.size() != row.size() - 1)
        throw DimensionError("kalman_row: need one sigma_r^2 per step");
    std::vector<double> out(row.size());
    out[0] = row[0];
    double q_post = 0.0;
    if (trace) {
        trace->clear();
        trace->push_back({0.0, 0.0, 0.0});
    }
    for (std::size_t j = 1; j < row.size(); ++j) {
        const double i_prior = out[j - 1];
        const double q_prior = q_post + std::max(sigma_r2[j - 1], detail::kSigmaR2Floor);
        const double gain = q_prior / (q_prior + sigma_g2);
        out[j] = i_prior + gain * (row[j] - i_prior);
        q_post = (1.0 - gain) * q_prior;
        if (trace) trace->push_back({gain, q_prior, q_post});
    }
    return out;
}

inline ScalarGrid apply_kalman(const ScalarGrid& noisy, const KalmanConfig& cfg = {}) {
    cfg.validate();
    if (noisy.cols() < 2)
        throw DimensionError("apply_kalman needs at least 2 columns");
    if (!all_finite(noisy))
        throw DomainError("apply_kalman: input contains non-finite values");

    const double sigma_g2 = estimate_sigma_g2(noisy);

    ScalarGrid input = noisy;
    ScalarGrid trend;
    if (cfg.enable_detrend) {
        trend = ScalarGrid(noisy.rows(), noisy.cols());
        const int radius = cfg.window_wk / 2;
        for (std::size_t i = 0; i < noisy.rows(); ++i)
            for (std::size_t j = 0; j < noisy.cols(); ++j) {
                double acc = 0.0;
                for (int d = -radius; d <= radius; ++d)
                    acc += noisy.at_clamped(static_cast<std::ptrdiff_t>(i),
                                            static_cast<std::ptrdiff_t>(j) + d);
                trend(i, j) = acc / static_cast<double>(cfg.window_wk);
                input(i, j) = noisy(i, j) - trend(i, j);
            }
    }

    ScalarGrid out(noisy.rows(), noisy.cols());
    std::vector<double> row(noisy.cols());
    std::vector<double> sigma_r2(noisy.cols() - 1);
    for (std::size_t i = 0; i < noisy.rows(); ++i) {
        for (std::size_t j = 0; j < noisy.cols(); ++j) row[j] = input(i, j);
        for (std::size_t j = 1; j < noisy.cols(); ++j)
            sigma_r2[j - 1] = estimate_sigma_r2(noisy, i, j, cfg);
        const std::vector<double> filtered = kalman_row(row, sigma_r2, sigma_g2);
        for (std::size_t j = 0; j < noisy.cols(); ++j)
            out(i, j) = filtered[j] + (cfg.enable_detrend ? trend(i, j) : 0.0);
    }
    return out;
}

}  // namespace poroflow

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"

namespace poroflow {

// Composite strain noise: a mean-one multiplicative amplitude-modulation
// field times the true strain, plus white Gaussian additive noise scaled
// to a requested SNR. Use snr_db = +inf for no additive component.

struct NoiseConfig {
    double snr_db = 40.0;
    double am_sigma = 0.1;     // log-amplitude std of the AM factor
    double am_corr_len = 2.0;  // pixels, spatial correlation of the AM field
    std::uint64_t seed = 0;

    void validate() const {
        if (std::isnan(snr_db)) throw ConfigError("snr_db must not be NaN");
        if (!(am_sigma >= 0.0)) throw ConfigError("am_sigma must be >= 0");
        if (!(am_corr_len >= 0.0)) throw ConfigError("am_corr_len must be >= 0");
    }
};

struct NoiseRealization {
    ScalarGrid am_field;        // multiplicative factor, mean ~ 1, > 0
    ScalarGrid additive_field;  // strain units
    ScalarGrid noisy;           // am_field .* truth + additive_field
};

/// Energy SNR of a noisy grid against the truth:
/// 10 log10(sum(truth^2) / sum((noisy - truth)^2)). Returns +inf when the
/// residual is identically zero.
inline double measure_snr(const ScalarGrid& truth, const ScalarGrid& noisy) {
    if (!truth.same_shape(noisy))
        throw DimensionError("measure_snr: grid shapes differ");
    double signal = 0.0, residual = 0.0;
    for (std::size_t n = 0; n < truth.size(); ++n) {
        const double t = truth.data()[n];
        const double d = noisy.data()[n] - t;
        signal += t * t;
        residual += d * d;
    }
    if (signal == 0.0) throw DomainError("measure_snr: truth is identically zero");
    if (residual == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(signal / residual);
}

inline NoiseRealization corrupt(const ScalarGrid& truth, const NoiseConfig& cfg) {
    cfg.validate();
    if (!all_finite(truth)) throw DomainError("corrupt: truth contains non-finite values");
    const std::size_t n = truth.size();
    double truth_energy = 0.0;
    for (double v : truth) truth_energy += v * v;
    const bool finite_snr = std::isfinite(cfg.snr_db);
    if (finite_snr && truth_energy == 0.0)
        throw DomainError("corrupt: SNR undefined for an all-zero truth grid");

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // The two white fields are drawn in a fixed order so a given seed is
    // reproducible and independent of the truth values.
    ScalarGrid white_am(truth.rows(), truth.cols());
    for (double& v : white_am.data()) v = gauss(rng);
    ScalarGrid white_add(truth.rows(), truth.cols());
    for (double& v : white_add.data()) v = gauss(rng);

    NoiseRealization out;
    out.am_field = ScalarGrid(truth.rows(), truth.cols(), 1.0);
    if (cfg.am_sigma > 0.0) {
        ScalarGrid s = white_am;
        if (cfg.am_corr_len > 0.0) {
            const int ksize = 2 * static_cast<int>(std::ceil(3.0 * cfg.am_corr_len)) + 1;
            s = gaussian_smooth(s, ksize, cfg.am_corr_len);
        }
        // Restandardize so exp(sigma*S - sigma^2/2) has unit mean.
        const double m = grid_mean(s);
        const double sd = std::sqrt(grid_variance(s));
        if (sd == 0.0) throw DomainError("corrupt: degenerate AM field (zero variance)");
        for (std::size_t idx = 0; idx < n; ++idx) {
            const double z = (s.data()[idx] - m) / sd;
            out.am_field.data()[idx] =
                std::exp(cfg.am_sigma * z - 0.5 * cfg.am_sigma * cfg.am_sigma);
        }
    }

    out.additive_field = ScalarGrid(truth.rows(), truth.cols(), 0.0);
    if (finite_snr) {
        const double sigma_g = std::sqrt(truth_energy / static_cast<double>(n)) *
                               std::pow(10.0, -cfg.snr_db / 20.0);
        for (std::size_t idx = 0; idx < n; ++idx)
            out.additive_field.data()[idx] = sigma_g * white_add.data()[idx];
    }

    out.noisy = ScalarGrid(truth.rows(), truth.cols());
    for (std::size_t idx = 0; idx < n; ++idx)
        out.noisy.data()[idx] =
            out.am_field.data()[idx] * truth.data()[idx] + out.additive_field.data()[idx];
    return out;
}

}  // namespace poroflow

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"

namespace poroflow {

// Elastographic image-quality factors: contrast-to-noise ratio between an
// inclusion and a background region, and percent relative error against
// ground truth.

struct RegionSpec {
    ScalarGrid inclusion_mask;   // 0/1
    ScalarGrid background_mask;  // 0/1

    static constexpr std::size_t kMinRegionPixels = 16;

    void validate() const {
        if (!inclusion_mask.same_shape(background_mask))
            throw DimensionError("region masks have different shapes");
        std::size_t n_inc = 0, n_bg = 0;
        for (std::size_t n = 0; n < inclusion_mask.size(); ++n) {
            const double a = inclusion_mask.data()[n];
            const double b = background_mask.data()[n];
            if ((a != 0.0 && a != 1.0) || (b != 0.0 && b != 1.0))
                throw DomainError("region masks must contain only 0 or 1");
            if (a == 1.0 && b == 1.0)
                throw DomainError("region masks must be disjoint");
            n_inc += (a == 1.0);
            n_bg += (b == 1.0);
        }
        if (n_inc < kMinRegionPixels || n_bg < kMinRegionPixels)
            throw DomainError("each region must select at least " +
                              std::to_string(kMinRegionPixels) + " pixels");
    }
};

inline ScalarGrid full_mask(std::size_t rows, std::size_t cols) {
    return ScalarGrid(rows, cols, 1.0);
}

namespace detail {

struct MaskedStats {
    double mean = 0.0;
    double variance = 0.0;  // population
    std::size_t count = 0;
};

inline MaskedStats masked_stats(const ScalarGrid& image, const ScalarGrid& mask) {
    if (!image.same_shape(mask))
        throw DimensionError("mask shape differs from image");
    MaskedStats s;
    double sum = 0.0;
    for (std::size_t n = 0; n < image.size(); ++n)
        if (mask.data()[n] != 0.0) {
            sum += image.data()[n];
            ++s.count;
        }
    if (s.count == 0) return s;
    s.mean = sum / static_cast<double>(s.count);
    double acc = 0.0;
    for (std::size_t n = 0; n < image.size(); ++n)
        if (mask.data()[n] != 0.0) {
            const double d = image.data()[n] - s.mean;
            acc += d * d;
        }
    s.variance = acc / static_cast<double>(s.count);
    return s;
}

}  // namespace detail

/// CNRe = 2 (m_i - m_b)^2 / (sigma_i^2 + sigma_b^2) with masked means and
/// population variances. Perfectly uniform regions (zero pooled variance)
/// yield +inf; callers presenting results should flag such cells.
inline double cnre(const ScalarGrid& image, const RegionSpec& regions) {
    regions.validate();
    const auto inc = detail::masked_stats(image, regions.inclusion_mask);
    const auto bg = detail::masked_stats(image, regions.background_mask);
    const double pooled = inc.variance + bg.variance;
    if (pooled == 0.0) return std::numeric_limits<double>::infinity();
    const double dm = inc.mean - bg.mean;
    return 2.0 * dm * dm / pooled;
}

struct PreResult {
    double percent = 0.0;
    std::size_t excluded_pixels = 0;
};

/// Percent relative error over the masked pixels:
///   mean of |est - truth| / |truth| * 100.
/// Pixels with |truth| < 1e-12 * max|truth| (max over the mask) are
/// excluded and counted, so near-zero truth cannot blow up the mean.
/// signed_errors switches to the literal signed form (est - truth)/truth,
/// where cancellation across pixels is possible.
inline PreResult pre(const ScalarGrid& estimate, const ScalarGrid& truth,
                     const ScalarGrid& mask, bool signed_errors = false) {
    if (!estimate.same_shape(truth) || !estimate.same_shape(mask))
        throw DimensionError("pre: estimate, truth and mask shapes differ");
    double max_abs_truth = 0.0;
    for (std::size_t n = 0; n < truth.size(); ++n)
        if (mask.data()[n] != 0.0)
            max_abs_truth = std::max(max_abs_truth, std::abs(truth.data()[n]));
    const double eps = 1e-12 * max_abs_truth;

    PreResult res;
    double acc = 0.0;
    std::size_t included = 0;
    for (std::size_t n = 0; n < truth.size(); ++n) {
        if (mask.data()[n] == 0.0) continue;
        const double t = truth.data()[n];
        if (max_abs_truth == 0.0 || std::abs(t) < eps) {
            ++res.excluded_pixels;
            continue;
        }
        const double e = estimate.data()[n];
        acc += signed_errors ? (e - t) / t : std::abs(e - t) / std::abs(t);
        ++included;
    }
    if (included == 0)
        throw DomainError("pre: all masked pixels excluded (truth is zero there)");
    res.percent = acc / static_cast<double>(included) * 100.0;
    return res;
}

/// One benchmark/report cell, shaped after the metrics CSV columns.
struct MetricsReport {
    std::string filter_tag;
    double snr_db = 0.0;
    double t = 0.0;  // s
    std::string quantity;
    double cnre = 0.0;
    double pre_percent = 0.0;
    std::size_t excluded_pixels = 0;
};

}  // namespace poroflow

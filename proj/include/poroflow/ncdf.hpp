#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"

namespace poroflow {

// Step II: nonlinear complex diffusion. The image evolves as
//   dI/dt = div(D grad I),   D = exp(i theta) / (1 + (Im(I) / (k theta))^2)
// discretized explicitly as
//   I <- I + dt * (Dbar .* lap(I) + grad(D) . grad(I))
// where Dbar is the 8-weight neighborhood average of D. Im(I) acts as an
// edge detector (it grows where the Laplacian is large), so diffusion
// stalls at edges and proceeds in smooth regions. The threshold map k is
// rescaled from a Gaussian-smoothed copy of Re(I) each iteration, and the
// time step adapts to the current rate of change.

struct NcdfConfig {
    double theta = std::numbers::pi / 30.0;
    double k_max = 28.0;
    double k_min = 2.0;
    int kernel_n = 3;          // k-map smoothing kernel size
    double kernel_sigma = 10.0;
    double a = 0.25;           // time-step dynamic range: dt in (a/b, 1/b]
    double b = 4.0;
    int max_iters = 20;
    double rel_change_tol = 1e-4;

    void validate() const {
        if (!(theta > 0.0 && theta < std::numbers::pi / 2.0))
            throw ConfigError("theta must lie in (0, pi/2)");
        if (!(k_min < k_max)) throw ConfigError("k_min must be < k_max");
        if (!(k_min > 0.0)) throw ConfigError("k_min must be positive");
        if (kernel_n < 1 || kernel_n % 2 == 0)
            throw ConfigError("kernel_n must be odd and positive");
        if (!(kernel_sigma > 0.0)) throw ConfigError("kernel_sigma must be positive");
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("a must lie in (0, 1)");
        if (!(b > 0.0)) throw ConfigError("b must be positive");
        if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
        if (!(rel_change_tol >= 0.0)) throw ConfigError("rel_change_tol must be >= 0");
    }
};

struct DiffusionFields {
    ComplexGrid d_map;
    ComplexGrid d_avg;
    ScalarGrid k_map;
    double dt = 0.0;
};

/// Threshold map: smooth Re(I), then rescale its range onto
/// [k_min, k_max] with k = k_max at the minimum of the smoothed image.
/// A constant image maps to k_max everywhere.
inline ScalarGrid compute_k_map(const ComplexGrid& image, const NcdfConfig& cfg) {
    cfg.validate();
    const ScalarGrid g = gaussian_smooth(real_part(image), cfg.kernel_n, cfg.kernel_sigma);
    const double lo = grid_min(g);
    const double hi = grid_max(g);
    ScalarGrid k(image.rows(), image.cols(), cfg.k_max);
    if (hi > lo) {
        const double span = hi - lo;
        for (std::size_t n = 0; n < g.size(); ++n)
            k.data()[n] = cfg.k_max + (cfg.k_min - cfg.k_max) * (g.data()[n] - lo) / span;
    }
    return k;
}

/// D = exp(i theta) / (1 + (Im(I) / (k theta))^2), elementwise. |D| <= 1.
inline ComplexGrid diffusion_coefficient(const ComplexGrid& image, const ScalarGrid& k_map,
                                         double theta) {
    if (!image.same_shape(k_map))
        throw DimensionError("diffusion_coefficient: k_map shape differs from image");
    const std::complex<double> rot(std::cos(theta), std::sin(theta));
    ComplexGrid d(image.rows(), image.cols());
    for (std::size_t n = 0; n < image.size(); ++n) {
        const double ratio = image.data()[n].imag() / (k_map.data()[n] * theta);
        d.data()[n] = rot / (1.0 + ratio * ratio);
    }
    return d;
}

/// Neighborhood average (4 D + four axis neighbors) / 8, replicate
/// boundaries.
inline ComplexGrid average_diffusion(const ComplexGrid& d_map) {
    detail::require_stencil_size(d_map, "average_diffusion");
    ComplexGrid out(d_map.rows(), d_map.cols());
    const auto rows = static_cast<std::ptrdiff_t>(d_map.rows());
    const auto cols = static_cast<std::ptrdiff_t>(d_map.cols());
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::ptrdiff_t j = 0; j < cols; ++j)
            out(i, j) = (4.0 * d_map(i, j) + d_map.at_clamped(i + 1, j) +
                         d_map.at_clamped(i - 1, j) + d_map.at_clamped(i, j + 1) +
                         d_map.at_clamped(i, j - 1)) /
                        8.0;
    return out;
}

/// dt = (a + (1 - a) exp(-max_{i,j} |Re(dI/dt)| / max(|Re I|, eps))) / b.
/// The denominator guard eps is 1e-12 * max|Re I|; the elementwise ratio
/// of absolute values is formed first, then the maximum taken.
inline double adaptive_timestep(const ComplexGrid& image, const ComplexGrid& rate_of_change,
                                const NcdfConfig& cfg) {
    cfg.validate();
    if (!image.same_shape(rate_of_change))
        throw DimensionError("adaptive_timestep: rate shape differs from image");
    double max_re = 0.0;
    for (const auto& v : image.data()) max_re = std::max(max_re, std::abs(v.real()));
    if (max_re == 0.0)
        throw DomainError("adaptive_timestep: real part of the image is identically zero");
    const double eps_den = 1e-12 * max_re;
    double max_ratio = 0.0;
    for (std::size_t n = 0; n < image.size(); ++n) {
        const double den = std::max(std::abs(image.data()[n].real()), eps_den);
        max_ratio = std::max(max_ratio, std::abs(rate_of_change.data()[n].real()) / den);
    }
    const double dt = (cfg.a + (1.0 - cfg.a) * std::exp(-max_ratio)) / cfg.b;
    // exp(-r) > 0 for finite r, so dt lies in (a/b, 1/b]; keep the open lower
    // bound when exp underflows past the last representable increment.
    return std::min(std::max(dt, std::nextafter(cfg.a / cfg.b, 1.0)), 1.0 / cfg.b);
}

/// One explicit step. Returns the advanced image and the dt used.
inline std::pair<ComplexGrid, double> ncdf_step(const ComplexGrid& image,
                                                const NcdfConfig& cfg) {
    cfg.validate();
    detail::require_stencil_size(image, "ncdf_step");

    const ScalarGrid k_map = compute_k_map(image, cfg);
    const ComplexGrid d_map = diffusion_coefficient(image, k_map, cfg.theta);
    const ComplexGrid d_avg = average_diffusion(d_map);
    const ComplexGrid lap = laplacian(image);
    const GradientPair<std::complex<double>> grad_i = gradient(image);
    const GradientPair<std::complex<double>> grad_d = gradient(d_map);

    ComplexGrid rate(image.rows(), image.cols());
    for (std::size_t n = 0; n < image.size(); ++n)
        rate.data()[n] = d_avg.data()[n] * lap.data()[n] +
                         grad_d.d_row.data()[n] * grad_i.d_row.data()[n] +
                         grad_d.d_col.data()[n] * grad_i.d_col.data()[n];

    const double dt = adaptive_timestep(image, rate, cfg);

    ComplexGrid next(image.rows(), image.cols());
    for (std::size_t n = 0; n < image.size(); ++n) {
        next.data()[n] = image.data()[n] + dt * rate.data()[n];
        if (!detail::finite(next.data()[n]))
            throw NumericError("ncdf_step produced a non-finite value",
                               n / image.cols(), n % image.cols());
    }
    return {std::move(next), dt};
}

struct NcdfResult {
    ScalarGrid image;
    int iterations = 0;
    std::vector<double> dt_history;
};

/// Lift to a complex image (zero imaginary part), iterate ncdf_step until
/// the max change of Re(I) falls below rel_change_tol * max|Re(I)| or
/// max_iters is reached.
inline NcdfResult run_ncdf(const ScalarGrid& input, const NcdfConfig& cfg = {}) {
    cfg.validate();
    ComplexGrid cur = to_complex(input);
    NcdfResult res;
    for (int m = 0; m < cfg.max_iters; ++m) {
        auto [next, dt] = ncdf_step(cur, cfg);
        res.dt_history.push_back(dt);
        ++res.iterations;

        double max_delta = 0.0, max_re = 0.0;
        for (std::size_t n = 0; n < cur.size(); ++n) {
            max_delta = std::max(max_delta,
                                 std::abs(next.data()[n].real() - cur.data()[n].real()));
            max_re = std::max(max_re, std::abs(cur.data()[n].real()));
        }
        cur = std::move(next);
        if (max_delta < cfg.rel_change_tol * max_re) break;
    }
    res.image = real_part(cur);
    return res;
}

}  // namespace poroflow

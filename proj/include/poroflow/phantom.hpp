#pragma once

#include <cmath>
#include <vector>

#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"

namespace poroflow {

// Analytic creep phantom: an inclusion (tumor-like, stiffer, less
// compressible) embedded in a softer background, relaxing exponentially
// toward a drained steady state under a held compression.
//
// All fields are closed-form so tests can evaluate them independently.
// With R = sqrt((i - center_row)^2 + (j - center_col)^2) in pixels:
//
//   B(R)        = exp(-R^2 / (2 r^2)),          r = inclusion_radius
//   A(R)        = (E_b/E_i - 1) * B(R)
//   nu(R)       = nu_b + (nu_i - nu_b) * B(R)
//   eps_a(R,t)  = -applied_strain * (1 + A(R) * exp(-t/tau))
//   eps_l(R,t)  = -nu(R) * eps_a(R,t)
//   eps_v(R,t)  = eps_a + eps_l = -applied_strain*(1 - nu(R))*(1 + A(R)e^{-t/tau})
//   p(R,t)      = -K * (eps_v(R,t) - eps_v(R,inf))
//               =  K * applied_strain * (1 - nu(R)) * A(R) * exp(-t/tau)
//   v(R,t)      = -dp/dR
//               =  K * applied_strain * (E_b/E_i - 1) * exp(-t/tau)
//                  * (R/r^2) * B(R) * ((1 - nu_b) - 2 (nu_i - nu_b) B(R))
//
// K is the compression modulus of the inclusion, E_i / (3 (1 - 2 nu_i)).
// Compression is negative strain; the pressure transient carries the sign
// of (E_b/E_i - 1) and decays to zero as t -> inf.

struct PhantomConfig {
    std::size_t rows = 128;
    std::size_t cols = 128;
    double center_row = 64.0;
    double center_col = 64.0;
    double inclusion_radius = 16.0;  // pixels
    double E_b = 32780.0;            // Pa, background Young's modulus
    double E_i = 70470.0;            // Pa, inclusion Young's modulus
    double nu_b = 0.4;
    double nu_i = 0.3;
    double k_b = 3.19e-10;  // m^4 N^-1 s^-1, interstitial permeability (metadata)
    double k_i = 3.19e-12;
    double applied_strain = 0.01;  // peak axial strain magnitude
    double tau = 60.0;             // relaxation time constant, s
    std::vector<double> times = {36.0, 108.0, 180.0};

    void validate() const {
        if (rows < 3 || cols < 3)
            throw ConfigError("phantom grid must be at least 3x3");
        if (!(E_b > 0.0) || !(E_i > 0.0))
            throw ConfigError("Young's moduli must be positive");
        if (!(nu_b > 0.0 && nu_b < 0.5) || !(nu_i > 0.0 && nu_i < 0.5))
            throw ConfigError("Poisson's ratios must lie in (0, 0.5)");
        if (!(inclusion_radius > 0.0))
            throw ConfigError("inclusion radius must be positive");
        if (!(tau > 0.0)) throw ConfigError("tau must be positive");
        if (center_row - inclusion_radius < 0.0 ||
            center_col - inclusion_radius < 0.0 ||
            center_row + inclusion_radius > static_cast<double>(rows) - 1.0 ||
            center_col + inclusion_radius > static_cast<double>(cols) - 1.0)
            throw ConfigError("inclusion does not fit inside the grid");
    }
};

struct PhantomState {
    double t = 0.0;
    ScalarGrid axial;
    ScalarGrid lateral;
    ScalarGrid volumetric;
    ScalarGrid pressure_truth;  // Pa
    ScalarGrid velocity_truth;  // Pa / pixel
};

/// Compression modulus K = E_i / (3 (1 - 2 nu_i)) used for the phantom's
/// own pressure field. Pass the same value to the poro estimator when
/// comparing against pressure_truth.
inline double compression_modulus(const PhantomConfig& cfg) {
    return cfg.E_i / (3.0 * (1.0 - 2.0 * cfg.nu_i));
}

inline PhantomState generate_phantom(const PhantomConfig& cfg, double t) {
    cfg.validate();
    if (t < 0.0) throw DomainError("phantom time must be non-negative");

    const double r2 = cfg.inclusion_radius * cfg.inclusion_radius;
    const double contrast = cfg.E_b / cfg.E_i - 1.0;
    const double decay = std::exp(-t / cfg.tau);
    const double K = compression_modulus(cfg);
    const double s = cfg.applied_strain;

    PhantomState st;
    st.t = t;
    st.axial = ScalarGrid(cfg.rows, cfg.cols);
    st.lateral = ScalarGrid(cfg.rows, cfg.cols);
    st.volumetric = ScalarGrid(cfg.rows, cfg.cols);
    st.pressure_truth = ScalarGrid(cfg.rows, cfg.cols);
    st.velocity_truth = ScalarGrid(cfg.rows, cfg.cols);

    for (std::size_t i = 0; i < cfg.rows; ++i) {
        for (std::size_t j = 0; j < cfg.cols; ++j) {
            const double di = static_cast<double>(i) - cfg.center_row;
            const double dj = static_cast<double>(j) - cfg.center_col;
            const double R2 = di * di + dj * dj;
            const double R = std::sqrt(R2);
            const double bump = std::exp(-R2 / (2.0 * r2));
            const double A = contrast * bump;
            const double nu = cfg.nu_b + (cfg.nu_i - cfg.nu_b) * bump;

            const double axial = -s * (1.0 + A * decay);
            const double lateral = -nu * axial;
            st.axial(i, j) = axial;
            st.lateral(i, j) = lateral;
            st.volumetric(i, j) = axial + lateral;
            st.pressure_truth(i, j) = K * s * (1.0 - nu) * A * decay;
            st.velocity_truth(i, j) =
                K * s * contrast * decay * (R / r2) * bump *
                ((1.0 - cfg.nu_b) - 2.0 * (cfg.nu_i - cfg.nu_b) * bump);
        }
    }
    return st;
}

/// Hard 0/1 disk: 1 where R <= inclusion_radius.
inline ScalarGrid inclusion_mask(const PhantomConfig& cfg) {
    cfg.validate();
    ScalarGrid mask(cfg.rows, cfg.cols, 0.0);
    const double r2 = cfg.inclusion_radius * cfg.inclusion_radius;
    for (std::size_t i = 0; i < cfg.rows; ++i)
        for (std::size_t j = 0; j < cfg.cols; ++j) {
            const double di = static_cast<double>(i) - cfg.center_row;
            const double dj = static_cast<double>(j) - cfg.center_col;
            if (di * di + dj * dj <= r2) mask(i, j) = 1.0;
        }
    return mask;
}

/// Background annulus for contrast statistics: radii in
/// [2r + 1, 3r - 1] (eroded by one pixel on both rims), additionally kept
/// at least 2 pixels away from the grid border.
inline ScalarGrid background_ring_mask(const PhantomConfig& cfg) {
    cfg.validate();
    ScalarGrid mask(cfg.rows, cfg.cols, 0.0);
    const double inner = 2.0 * cfg.inclusion_radius + 1.0;
    const double outer = 3.0 * cfg.inclusion_radius - 1.0;
    for (std::size_t i = 2; i + 2 < cfg.rows; ++i)
        for (std::size_t j = 2; j + 2 < cfg.cols; ++j) {
            const double di = static_cast<double>(i) - cfg.center_row;
            const double dj = static_cast<double>(j) - cfg.center_col;
            const double R = std::sqrt(di * di + dj * dj);
            if (R >= inner && R <= outer) mask(i, j) = 1.0;
        }
    return mask;
}

}  // namespace poroflow

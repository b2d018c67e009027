#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"

namespace poroflow {

// Poroelastic estimators on filtered volumetric strain elastograms:
//   p(R,t)  = -K (eps(R,t) - eps(R,inf))
//   v_R(R,t) = -dp/dR, permeability-normalized (Pa per pixel)
// eps(R,inf) is taken from a user-designated late frame; the estimator
// cannot know when the series is steady, so the choice is explicit config.

struct PoroConfig {
    double compression_modulus_k = 0.0;  // Pa; required, no meaningful default
    std::size_t center_row = 0;          // radial origin R = 0
    std::size_t center_col = 0;
    std::ptrdiff_t steady_state_index = -1;  // negative counts from the end

    void validate() const {
        if (!(compression_modulus_k > 0.0))
            throw ConfigError("compression_modulus_k must be positive (Pa)");
    }
};

struct PoroResult {
    ScalarGrid pressure;  // Pa
    ScalarGrid velocity;  // Pa / pixel
    double t = 0.0;       // s
};

struct StrainFrame {
    double t = 0.0;
    ScalarGrid vol_strain;
};

/// Plane-strain volumetric strain: axial + lateral, elementwise.
inline ScalarGrid volumetric_strain(const ScalarGrid& axial, const ScalarGrid& lateral) {
    if (!axial.same_shape(lateral))
        throw DimensionError("volumetric_strain: axial and lateral shapes differ");
    ScalarGrid out(axial.rows(), axial.cols());
    for (std::size_t n = 0; n < out.size(); ++n)
        out.data()[n] = axial.data()[n] + lateral.data()[n];
    return out;
}

inline ScalarGrid compute_pressure(const ScalarGrid& vol_strain_t,
                                   const ScalarGrid& vol_strain_inf,
                                   const PoroConfig& cfg) {
    cfg.validate();
    if (!vol_strain_t.same_shape(vol_strain_inf))
        throw DimensionError("compute_pressure: frame shapes differ");
    ScalarGrid p(vol_strain_t.rows(), vol_strain_t.cols());
    for (std::size_t n = 0; n < p.size(); ++n)
        p.data()[n] = -cfg.compression_modulus_k *
                      (vol_strain_t.data()[n] - vol_strain_inf.data()[n]);
    return p;
}

/// v = -(grad p . rhat) with rhat the unit vector from the configured
/// center to the pixel; v at the center pixel itself is 0 (rhat undefined
/// at R = 0).
inline ScalarGrid compute_velocity(const ScalarGrid& pressure, const PoroConfig& cfg) {
    cfg.validate();
    if (cfg.center_row >= pressure.rows() || cfg.center_col >= pressure.cols())
        throw ConfigError("radial center lies outside the grid");
    const GradientPair<double> grad = gradient(pressure);
    ScalarGrid v(pressure.rows(), pressure.cols());
    for (std::size_t i = 0; i < pressure.rows(); ++i)
        for (std::size_t j = 0; j < pressure.cols(); ++j) {
            const double dr = static_cast<double>(i) - static_cast<double>(cfg.center_row);
            const double dc = static_cast<double>(j) - static_cast<double>(cfg.center_col);
            const double radius = std::sqrt(dr * dr + dc * dc);
            if (radius == 0.0) {
                v(i, j) = 0.0;
                continue;
            }
            v(i, j) = -(grad.d_row(i, j) * dr + grad.d_col(i, j) * dc) / radius;
        }
    return v;
}

/// Index of the frame that plays eps(R, inf); negative counts from the
/// back, Python style.
inline std::size_t resolve_steady_index(std::size_t n_frames, std::ptrdiff_t index) {
    const std::ptrdiff_t resolved =
        index < 0 ? static_cast<std::ptrdiff_t>(n_frames) + index : index;
    if (resolved < 0 || resolved >= static_cast<std::ptrdiff_t>(n_frames))
        throw ConfigError("steady_state_index " + std::to_string(index) +
                          " out of range for " + std::to_string(n_frames) + " frames");
    return static_cast<std::size_t>(resolved);
}

inline std::vector<PoroResult> estimate_poro_series(const std::vector<StrainFrame>& frames,
                                                    const PoroConfig& cfg) {
    cfg.validate();
    if (frames.size() < 2)
        throw DomainError("estimate_poro_series needs at least 2 frames "
                          "(one must act as the steady state)");
    for (const StrainFrame& f : frames)
        if (!f.vol_strain.same_shape(frames.front().vol_strain))
            throw DimensionError("estimate_poro_series: frame shapes differ");
    const std::size_t steady = resolve_steady_index(frames.size(), cfg.steady_state_index);
    std::vector<PoroResult> out;
    out.reserve(frames.size());
    for (const StrainFrame& f : frames) {
        PoroResult r;
        r.t = f.t;
        r.pressure = compute_pressure(f.vol_strain, frames[steady].vol_strain, cfg);
        r.velocity = compute_velocity(r.pressure, cfg);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace poroflow

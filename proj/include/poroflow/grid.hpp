#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "poroflow/errors.hpp"

namespace poroflow {

/// Dense 2D field, row-major. T is double for strain/pressure/velocity
/// maps and std::complex<double> for the diffusion iterate.
template <class T>
class Grid {
public:
    Grid() = default;

    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0)
            throw DimensionError("grid dimensions must be positive");
    }

    Grid(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0)
            throw DimensionError("grid dimensions must be positive");
        if (data_.size() != rows * cols)
            throw DimensionError("data length does not match rows*cols");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    /// Read with replicate (Neumann) boundary extension.
    const T& at_clamped(std::ptrdiff_t i, std::ptrdiff_t j) const {
        const std::ptrdiff_t ci =
            std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(rows_) - 1);
        const std::ptrdiff_t cj =
            std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(cols_) - 1);
        return data_[static_cast<std::size_t>(ci) * cols_ + static_cast<std::size_t>(cj)];
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    template <class U>
    bool same_shape(const Grid<U>& other) const {
        return rows_ == other.rows() && cols_ == other.cols();
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ScalarGrid = Grid<double>;
using ComplexGrid = Grid<std::complex<double>>;

namespace detail {

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
void require_stencil_size(const Grid<T>& g, const char* op) {
    if (g.rows() < 3 || g.cols() < 3)
        throw DimensionError(std::string(op) + " requires a grid of at least 3x3");
}

}  // namespace detail

template <class T>
bool all_finite(const Grid<T>& g) {
    for (const T& v : g.data())
        if (!detail::finite(v)) return false;
    return true;
}

/// 5-point Laplacian, replicate boundaries:
/// L(i,j) = I(i+1,j) + I(i-1,j) + I(i,j+1) + I(i,j-1) - 4 I(i,j).
template <class T>
Grid<T> laplacian(const Grid<T>& g) {
    detail::require_stencil_size(g, "laplacian");
    Grid<T> out(g.rows(), g.cols());
    const auto rows = static_cast<std::ptrdiff_t>(g.rows());
    const auto cols = static_cast<std::ptrdiff_t>(g.cols());
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::ptrdiff_t j = 0; j < cols; ++j)
            out(i, j) = g.at_clamped(i + 1, j) + g.at_clamped(i - 1, j) +
                        g.at_clamped(i, j + 1) + g.at_clamped(i, j - 1) -
                        T(4) * g(i, j);
    return out;
}

/// Central-difference gradient components. d_row differentiates along the
/// row index (axial direction), d_col along the column index (lateral).
/// Units are value per pixel.
template <class T>
struct GradientPair {
    Grid<T> d_row;
    Grid<T> d_col;
};

template <class T>
GradientPair<T> gradient(const Grid<T>& g) {
    detail::require_stencil_size(g, "gradient");
    GradientPair<T> out{Grid<T>(g.rows(), g.cols()), Grid<T>(g.rows(), g.cols())};
    const auto rows = static_cast<std::ptrdiff_t>(g.rows());
    const auto cols = static_cast<std::ptrdiff_t>(g.cols());
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::ptrdiff_t j = 0; j < cols; ++j) {
            out.d_row(i, j) = (g.at_clamped(i + 1, j) - g.at_clamped(i - 1, j)) / T(2);
            out.d_col(i, j) = (g.at_clamped(i, j + 1) - g.at_clamped(i, j - 1)) / T(2);
        }
    return out;
}

/// Sampled 1D Gaussian exp(-d^2 / 2 sigma^2) at integer offsets, normalized
/// to sum 1. The 2D smoothing kernel is the outer product of this with
/// itself, so separable application below equals full 2D convolution.
inline std::vector<double> gaussian_kernel_1d(int kernel_size, double sigma) {
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw ConfigError("gaussian kernel size must be odd and positive, got " +
                          std::to_string(kernel_size));
    if (!(sigma > 0.0))
        throw ConfigError("gaussian sigma must be positive");
    std::vector<double> k(static_cast<std::size_t>(kernel_size));
    const int radius = kernel_size / 2;
    double sum = 0.0;
    for (int d = -radius; d <= radius; ++d) {
        const double w = std::exp(-0.5 * (d * d) / (sigma * sigma));
        k[static_cast<std::size_t>(d + radius)] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

/// Convolution with a normalized sampled Gaussian, replicate boundaries.
inline ScalarGrid gaussian_smooth(const ScalarGrid& g, int kernel_size, double sigma) {
    const std::vector<double> k = gaussian_kernel_1d(kernel_size, sigma);
    const int radius = kernel_size / 2;
    const auto rows = static_cast<std::ptrdiff_t>(g.rows());
    const auto cols = static_cast<std::ptrdiff_t>(g.cols());

    ScalarGrid tmp(g.rows(), g.cols());
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::ptrdiff_t j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d)
                acc += k[static_cast<std::size_t>(d + radius)] * g.at_clamped(i, j + d);
            tmp(i, j) = acc;
        }
    ScalarGrid out(g.rows(), g.cols());
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        for (std::ptrdiff_t j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d)
                acc += k[static_cast<std::size_t>(d + radius)] * tmp.at_clamped(i + d, j);
            out(i, j) = acc;
        }
    return out;
}

inline double grid_min(const ScalarGrid& g) {
    return *std::min_element(g.begin(), g.end());
}

inline double grid_max(const ScalarGrid& g) {
    return *std::max_element(g.begin(), g.end());
}

inline double grid_mean(const ScalarGrid& g) {
    double sum = 0.0;
    for (double v : g) sum += v;
    return sum / static_cast<double>(g.size());
}

/// Population variance (divides by N).
inline double grid_variance(const ScalarGrid& g) {
    const double m = grid_mean(g);
    double acc = 0.0;
    for (double v : g) acc += (v - m) * (v - m);
    return acc / static_cast<double>(g.size());
}

inline double grid_max_abs(const ScalarGrid& g) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
}

inline ComplexGrid to_complex(const ScalarGrid& g) {
    ComplexGrid out(g.rows(), g.cols());
    for (std::size_t n = 0; n < g.size(); ++n)
        out.data()[n] = std::complex<double>(g.data()[n], 0.0);
    return out;
}

inline ScalarGrid real_part(const ComplexGrid& g) {
    ScalarGrid out(g.rows(), g.cols());
    for (std::size_t n = 0; n < g.size(); ++n) out.data()[n] = g.data()[n].real();
    return out;
}

inline ScalarGrid imag_part(const ComplexGrid& g) {
    ScalarGrid out(g.rows(), g.cols());
    for (std::size_t n = 0; n < g.size(); ++n) out.data()[n] = g.data()[n].imag();
    return out;
}

}  // namespace poroflow

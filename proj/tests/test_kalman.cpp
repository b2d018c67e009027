#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "poroflow/kalman.hpp"
#include "poroflow/noise.hpp"
#include "poroflow/phantom.hpp"
#include "util.hpp"

using namespace poroflow;

namespace {

// Plain transliteration of the scalar recursion, kept separate from the
// library so the two can drift apart only by mistake.
std::vector<double> oracle_row(const std::vector<double>& row,
                               const std::vector<double>& sigma_r2, double sigma_g2) {
    std::vector<double> out(row.size());
    out[0] = row[0];
    double q = 0.0;
    for (std::size_t j = 1; j < row.size(); ++j) {
        const double q_bar = q + std::max(sigma_r2[j - 1], 1e-20);
        const double g = q_bar / (q_bar + sigma_g2);
        out[j] = out[j - 1] + g * (row[j] - out[j - 1]);
        q = (1.0 - g) * q_bar;
    }
    return out;
}

double two_pass_variance(const ScalarGrid& g) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    double acc = 0.0;
    for (double v : g) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(g.size());
}

}  // namespace

TEST_CASE("measurement noise variance is the population variance") {
    const ScalarGrid two(1, 2, std::vector<double>{0.0, 2.0});
    CHECK(estimate_sigma_g2(two) == doctest::Approx(1.0).epsilon(1e-15));
    const ScalarGrid g = testutil::random_grid(9, 11, 31);
    CHECK(estimate_sigma_g2(g) == doctest::Approx(two_pass_variance(g)).epsilon(1e-12));
    CHECK_THROWS_AS(estimate_sigma_g2(ScalarGrid(1, 1, 1.0)), DomainError);
}

TEST_CASE("block mean equals a single smoothed pixel") {
    const ScalarGrid g = testutil::random_grid(10, 10, 32);
    const KalmanConfig cfg;
    const ScalarGrid smoothed = gaussian_smooth(g, cfg.block_size, cfg.block_kernel_sigma);
    for (std::size_t i : {0UL, 4UL, 9UL})
        for (std::size_t j : {0UL, 5UL, 9UL})
            CHECK(block_mean(g, i, j, cfg) == doctest::Approx(smoothed(i, j)).epsilon(1e-13));
}

TEST_CASE("process noise estimates") {
    const KalmanConfig cfg;
    SUBCASE("constant grid gives exactly zero") {
        const ScalarGrid g(6, 6, 4.2);
        for (std::size_t j = 1; j < 6; ++j) CHECK(estimate_sigma_r2(g, 3, j, cfg) == 0.0);
    }
    SUBCASE("unit column ramp gives one in the interior") {
        ScalarGrid g(6, 8);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 8; ++j) g(i, j) = static_cast<double>(j);
        for (std::size_t j = 2; j + 1 < 8; ++j)
            CHECK(estimate_sigma_r2(g, 3, j, cfg) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("first column is out of domain") {
        CHECK_THROWS_AS(estimate_sigma_r2(ScalarGrid(4, 4, 1.0), 2, 0, cfg), DomainError);
    }
    SUBCASE("pixel outside the grid") {
        CHECK_THROWS_AS(estimate_sigma_r2(ScalarGrid(4, 4, 1.0), 9, 1, cfg),
                        DimensionError);
    }
}

TEST_CASE("hand-checked two-sample row") {
    // q_bar = 1, gain = 1/2, so the update moves halfway: 1 + 0.5*(3-1) = 2.
    const std::vector<double> out = kalman_row({1.0, 3.0}, {1.0}, 1.0);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 2.0);
}

TEST_CASE("row recursion matches the oracle to 1e-12") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::uniform_real_distribution<double> var(0.0, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 40);
        std::vector<double> row(n), s2(n - 1);
        for (double& v : row) v = val(rng);
        for (double& v : s2) v = var(rng);
        const double g2 = var(rng) + 1e-6;
        const std::vector<double> got = kalman_row(row, s2, g2);
        const std::vector<double> want = oracle_row(row, s2, g2);
        for (std::size_t j = 0; j < n; ++j)
            CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-12));
    }
}

TEST_CASE("full grid filter matches the composed oracle to 1e-12") {
    const ScalarGrid noisy = testutil::random_grid(12, 15, 78);
    const KalmanConfig cfg;
    const ScalarGrid filtered = apply_kalman(noisy, cfg);
    const double g2 = estimate_sigma_g2(noisy);
    for (std::size_t i = 0; i < noisy.rows(); ++i) {
        std::vector<double> row(noisy.cols()), s2(noisy.cols() - 1);
        for (std::size_t j = 0; j < noisy.cols(); ++j) row[j] = noisy(i, j);
        for (std::size_t j = 1; j < noisy.cols(); ++j)
            s2[j - 1] = estimate_sigma_r2(noisy, i, j, cfg);
        const std::vector<double> want = oracle_row(row, s2, g2);
        for (std::size_t j = 0; j < noisy.cols(); ++j)
            CHECK(filtered(i, j) == doctest::Approx(want[j]).epsilon(1e-12));
    }
}

TEST_CASE("gain lies in [0,1] and updates contract the variance") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> var(0.0, 1.0);
    int steps_checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 12);
        std::vector<double> row(n), s2(n - 1);
        for (double& v : row) v = val(rng);
        for (double& v : s2) v = var(rng);
        const double g2 = var(rng);
        std::vector<KalmanStepTrace> trace;
        kalman_row(row, s2, g2, &trace);
        REQUIRE(trace.size() == n);
        CHECK(trace[0].gain == 0.0);
        CHECK(trace[0].q_post == 0.0);
        for (std::size_t j = 1; j < n; ++j) {
            CHECK(trace[j].gain >= 0.0);
            CHECK(trace[j].gain <= 1.0);
            CHECK(trace[j].q_prior > 0.0);
            CHECK(trace[j].q_post <= trace[j].q_prior);
            CHECK(trace[j].q_post ==
                  doctest::Approx((1.0 - trace[j].gain) * trace[j].q_prior).epsilon(1e-12));
            ++steps_checked;
        }
    }
    CHECK(steps_checked >= 1000);
}

TEST_CASE("constant grids pass through unchanged") {
    const ScalarGrid g(8, 9, -0.01);
    const ScalarGrid out = apply_kalman(g);
    for (double v : out) CHECK(v == -0.01);
}

TEST_CASE("edits to one row only influence its one-pixel neighbourhood") {
    // Reversing a row preserves the global variance, so only rows whose
    // 3x3 block means touch the edited row can change.
    const ScalarGrid g = testutil::random_grid(8, 10, 80);
    const ScalarGrid out = apply_kalman(g);
    ScalarGrid edited = g;
    for (std::size_t j = 0; j < g.cols(); ++j) edited(5, j) = g(5, g.cols() - 1 - j);
    const ScalarGrid out_edited = apply_kalman(edited);
    bool row5_changed = false;
    for (std::size_t j = 0; j < g.cols(); ++j) {
        for (std::size_t i : {0u, 1u, 2u, 3u, 7u}) CHECK(out_edited(i, j) == out(i, j));
        if (out_edited(5, j) != out(5, j)) row5_changed = true;
    }
    CHECK(row5_changed);
}

TEST_CASE("adding a constant shifts the output by that constant") {
    const ScalarGrid g = testutil::random_grid(7, 9, 81);
    ScalarGrid shifted = g;
    for (double& v : shifted) v += 3.75;
    const ScalarGrid out = apply_kalman(g);
    const ScalarGrid out_shifted = apply_kalman(shifted);
    for (std::size_t n = 0; n < g.size(); ++n)
        CHECK(out_shifted.data()[n] ==
              doctest::Approx(out.data()[n] + 3.75).epsilon(1e-12));
}

TEST_CASE("filtering reduces MSE on noisy elastograms") {
    const PhantomConfig pc;
    const ScalarGrid truth = generate_phantom(pc, 36.0).lateral;
    int improved = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        NoiseConfig nc;
        nc.snr_db = 30.0;
        nc.am_sigma = 0.0;
        nc.seed = static_cast<std::uint64_t>(s) + 100;
        const ScalarGrid noisy = corrupt(truth, nc).noisy;
        const ScalarGrid filtered = apply_kalman(noisy);
        if (testutil::mse(filtered, truth) < testutil::mse(noisy, truth)) ++improved;
    }
    CHECK(improved >= 19);
}

TEST_CASE("optional detrend path") {
    KalmanConfig cfg;
    cfg.enable_detrend = true;
    SUBCASE("constant grids still pass through") {
        const ScalarGrid out = apply_kalman(ScalarGrid(5, 20, 2.0), cfg);
        for (double v : out) CHECK(v == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("differs from the plain path on structured input") {
        const PhantomConfig pc;
        const ScalarGrid truth = generate_phantom(pc, 36.0).lateral;
        NoiseConfig nc;
        nc.seed = 3;
        const ScalarGrid noisy = corrupt(truth, nc).noisy;
        const ScalarGrid plain = apply_kalman(noisy);
        const ScalarGrid detrended = apply_kalman(noisy, cfg);
        CHECK(all_finite(detrended));
        CHECK(testutil::max_abs_diff(plain, detrended) > 0.0);
    }
}

TEST_CASE("validation and error paths") {
    SUBCASE("window must be odd and >= 3") {
        KalmanConfig cfg;
        cfg.window_wk = 12;
        CHECK_THROWS_AS(apply_kalman(ScalarGrid(4, 4, 1.0), cfg), ConfigError);
        cfg.window_wk = 1;
        CHECK_THROWS_AS(apply_kalman(ScalarGrid(4, 4, 1.0), cfg), ConfigError);
    }
    SUBCASE("block size must be odd and >= 3") {
        KalmanConfig cfg;
        cfg.block_size = 4;
        CHECK_THROWS_AS(apply_kalman(ScalarGrid(4, 4, 1.0), cfg), ConfigError);
    }
    SUBCASE("needs two columns") {
        CHECK_THROWS_AS(apply_kalman(ScalarGrid(4, 1, 1.0)), DimensionError);
    }
    SUBCASE("rejects non-finite input") {
        ScalarGrid g(4, 4, 1.0);
        g(2, 2) = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(apply_kalman(g), DomainError);
    }
    SUBCASE("row length and sigma count must agree") {
        CHECK_THROWS_AS(kalman_row({1.0, 2.0, 3.0}, {0.1}, 1.0), DimensionError);
        CHECK_THROWS_AS(kalman_row({1.0}, {}, 1.0), DimensionError);
    }
}

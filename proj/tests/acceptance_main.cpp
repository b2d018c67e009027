// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failed criteria. Heavier than the unit tests; the full default
// benchmark sweep runs once and feeds criteria 1, 2 and the runtime check.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "poroflow/poroflow.hpp"

using namespace poroflow;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, bool passed, const std::string& what, const std::string& detail) {
    std::cout << "criterion " << number << ": " << (passed ? "PASS" : "FAIL") << " "
              << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!passed) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

double now_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- criteria 1 and 2: the full default sweep -------------------------
//
// The default sweep carries two am_sigma values. The mixed rows (am=0.1)
// drive the ordering comparisons of criterion 1. The additive-only rows
// (am=0) drive the velocity error band of criterion 2: multiplicative
// noise corrupts each frame in proportion to the full strain scale, so
// the frame-difference transient behind pressure and velocity is swamped
// at every snr_db and only the additive axis acts as an input-SNR dial.
// The band is scored at t=36 s, the snapshot the error-band comparison
// refers to; later frames have transients decayed toward zero truth.

struct GroupStats {
    // cnre: per (method, quantity, snr, t); pre: pooled per (method, quantity, snr)
    std::map<std::tuple<std::string, std::string, double, double>, std::vector<double>>
        cnre;
    std::map<std::tuple<std::string, std::string, double>, std::vector<double>> pre;
    std::set<double> snrs;
    std::set<double> times;
};

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

void run_sweep_criteria() {
    BenchConfig cfg;
    cfg.out_dir = (fs::temp_directory_path() / "poroflow_acceptance_sweep").string();
    const auto start = std::chrono::steady_clock::now();
    const BenchResult res = run_bench(cfg);
    const double sweep_s = now_seconds(start);

    GroupStats mixed;  // am = 0.1
    std::map<std::tuple<std::string, double>, std::vector<double>>
        vel_additive;  // velocity PRE at am = 0, t = 36; key: method, snr
    std::size_t bad_rows = 0;
    for (const BenchRow& r : res.rows) {
        if (r.status != "ok" || !std::isfinite(r.cnre) || !std::isfinite(r.pre_percent)) {
            ++bad_rows;
            continue;
        }
        if (r.am_sigma > 0.0) {
            mixed.snrs.insert(r.snr_db);
            mixed.times.insert(r.t);
            mixed.cnre[{r.method, r.quantity, r.snr_db, r.t}].push_back(r.cnre);
            mixed.pre[{r.method, r.quantity, r.snr_db}].push_back(r.pre_percent);
        } else if (r.quantity == "velocity" && r.t == 36.0) {
            vel_additive[{r.method, r.snr_db}].push_back(r.pre_percent);
        }
    }

    const std::vector<std::string> baselines = {"kalman", "ncdf", "median"};

    // Criterion 1: CNRe ordering at every (snr, t) for the three quantities,
    // PRE of pressure/velocity at 30 and 40 dB, sweep under 10 minutes.
    bool ordering_ok = bad_rows == 0 && res.failures == 0;
    std::string worst_case;
    double worst_margin = 1e300;
    for (const char* quantity_name : {"lateral_strain", "pressure", "velocity"})
        for (double snr : mixed.snrs)
            for (double t : mixed.times) {
                const std::string quantity = quantity_name;
                const auto it = mixed.cnre.find({"proposed", quantity, snr, t});
                if (it == mixed.cnre.end()) {
                    ordering_ok = false;
                    continue;
                }
                const double prop = mean_of(it->second);
                for (const std::string& method : baselines) {
                    const double base = mean_of(mixed.cnre.at({method, quantity, snr, t}));
                    const double margin = prop - base;
                    if (margin < worst_margin) {
                        worst_margin = margin;
                        worst_case = quantity + "@" + fmt(snr) + "dB,t=" + fmt(t) +
                                     " vs " + method;
                    }
                    if (prop < base) ordering_ok = false;
                }
            }

    bool pre_ok = true;
    for (const char* quantity_name : {"pressure", "velocity"})
        for (double snr : {30.0, 40.0}) {
            const std::string quantity = quantity_name;
            const double prop = mean_of(mixed.pre.at({"proposed", quantity, snr}));
            for (const std::string& method : baselines)
                if (prop > mean_of(mixed.pre.at({method, quantity, snr}))) pre_ok = false;
        }

    const bool time_ok = sweep_s < 600.0;
    report(1, ordering_ok && pre_ok && time_ok,
           "default-sweep CNRe ordering and pressure/velocity PRE (am=0.1 rows)",
           "smallest CNRe margin " + fmt(worst_margin) + " at " + worst_case +
               ", PRE ordering " + (pre_ok ? "holds" : "violated") + ", sweep " +
               fmt(sweep_s) + " s");

    // Criterion 2: proposed velocity PRE < 50% at every SNR on the additive
    // axis at t=36 s; at least one baseline above 100% at 30 dB.
    bool band_ok = true;
    double worst_prop_pre = 0.0;
    for (double snr : mixed.snrs) {
        const auto it = vel_additive.find({"proposed", snr});
        if (it == vel_additive.end()) {
            band_ok = false;
            continue;
        }
        const double p = mean_of(it->second);
        worst_prop_pre = std::max(worst_prop_pre, p);
        if (p >= 50.0) band_ok = false;
    }
    double best_baseline_30 = 0.0;
    for (const std::string& method : baselines)
        best_baseline_30 =
            std::max(best_baseline_30, mean_of(vel_additive.at({method, 30.0})));
    if (best_baseline_30 <= 100.0) band_ok = false;
    report(2, band_ok, "velocity PRE band (am=0 rows, t=36 s)",
           "proposed max " + fmt(worst_prop_pre) + "%, largest baseline at 30 dB " +
               fmt(best_baseline_30) + "%");
}

// ---- criterion 3: oracle equivalence -----------------------------------

ScalarGrid random_grid(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarGrid g(rows, cols);
    for (double& v : g.data()) v = dist(rng);
    return g;
}

void run_oracle_criterion() {
    double worst = 0.0;

    // Kalman scalar recursion against a plain transliteration.
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> val(-2.0, 2.0);
        std::uniform_real_distribution<double> var(0.0, 0.5);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 2 + rng() % 30;
            std::vector<double> row(n), s2(n - 1);
            for (double& v : row) v = val(rng);
            for (double& v : s2) v = var(rng);
            const double g2 = var(rng) + 1e-9;
            const std::vector<double> got = kalman_row(row, s2, g2);
            double prev = row[0], q = 0.0;
            for (std::size_t j = 1; j < n; ++j) {
                const double qb = q + std::max(s2[j - 1], 1e-20);
                const double g = qb / (qb + g2);
                prev = prev + g * (row[j] - prev);
                q = (1.0 - g) * qb;
                worst = std::max(worst, std::abs(got[j] - prev));
            }
        }
    }

    // NCDF first iteration against the closed-form reduction.
    {
        const NcdfConfig cfg;
        for (std::uint64_t seed : {21ULL, 22ULL}) {
            ScalarGrid input = random_grid(10, 9, seed);
            for (double& v : input) v += 2.0;
            const auto [next, dt] = ncdf_step(to_complex(input), cfg);
            const ScalarGrid lap = laplacian(input);
            for (std::size_t n = 0; n < input.size(); ++n) {
                const std::complex<double> want =
                    std::complex<double>(input.data()[n], 0.0) +
                    dt * std::exp(std::complex<double>(0.0, cfg.theta)) * lap.data()[n];
                worst = std::max(worst, std::abs(next.data()[n] - want));
            }
        }
    }

    // Median, separable convolution, laplacian and gradient against
    // brute-force forms.
    {
        const ScalarGrid g = random_grid(8, 9, 31);
        const ScalarGrid med = median_filter(g, 3);
        const ScalarGrid lap = laplacian(g);
        const auto grad = gradient(g);
        const ScalarGrid sm = gaussian_smooth(g, 3, 0.6);
        const auto k = gaussian_kernel_1d(3, 0.6);
        for (std::ptrdiff_t i = 0; i < 8; ++i)
            for (std::ptrdiff_t j = 0; j < 9; ++j) {
                std::vector<double> window;
                double conv = 0.0;
                for (int di = -1; di <= 1; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        window.push_back(g.at_clamped(i + di, j + dj));
                        conv += k[di + 1] * k[dj + 1] * g.at_clamped(i + di, j + dj);
                    }
                std::sort(window.begin(), window.end());
                worst = std::max(worst, std::abs(med(i, j) - window[4]));
                worst = std::max(worst, std::abs(sm(i, j) - conv));
                const double lap_want = g.at_clamped(i + 1, j) + g.at_clamped(i - 1, j) +
                                        g.at_clamped(i, j + 1) + g.at_clamped(i, j - 1) -
                                        4.0 * g.at_clamped(i, j);
                worst = std::max(worst, std::abs(lap(i, j) - lap_want));
                worst = std::max(
                    worst, std::abs(grad.d_row(i, j) -
                                    (g.at_clamped(i + 1, j) - g.at_clamped(i - 1, j)) / 2.0));
                worst = std::max(
                    worst, std::abs(grad.d_col(i, j) -
                                    (g.at_clamped(i, j + 1) - g.at_clamped(i, j - 1)) / 2.0));
            }
    }

    report(3, worst <= 1e-12, "oracle equivalence",
           "worst deviation " + fmt(worst) + " vs tolerance 1e-12");
}

// ---- criterion 4: property tests ---------------------------------------

void run_property_criterion() {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    bool ok = true;
    std::string first_violation;
    const auto fail = [&](const std::string& what) {
        ok = false;
        if (first_violation.empty()) first_violation = what;
    };

    // Kalman gain in [0,1], posterior variance never above prior.
    {
        int cases = 0;
        while (cases < 1000) {
            const std::size_t n = 2 + rng() % 10;
            std::vector<double> row(n), s2(n - 1);
            for (double& v : row) v = 2.0 * sym(rng);
            for (double& v : s2) v = unit(rng);
            std::vector<KalmanStepTrace> trace;
            kalman_row(row, s2, unit(rng), &trace);
            for (std::size_t j = 1; j < n; ++j, ++cases) {
                if (trace[j].gain < 0.0 || trace[j].gain > 1.0) fail("kalman gain range");
                if (trace[j].q_post > trace[j].q_prior) fail("kalman variance contraction");
            }
        }
    }

    // NCDF |D| <= 1 and k_map within [k_min, k_max] at Table-2 defaults.
    {
        const NcdfConfig cfg;
        int cases = 0;
        while (cases < 1000) {
            ComplexGrid img(6, 6);
            for (auto& v : img.data())
                v = std::complex<double>(sym(rng), 10.0 * sym(rng));
            const ScalarGrid k_map = compute_k_map(img, cfg);
            const ComplexGrid d = diffusion_coefficient(img, k_map, cfg.theta);
            for (std::size_t n = 0; n < d.size(); ++n, ++cases) {
                if (std::abs(d.data()[n]) > 1.0 + 1e-15) fail("|D| <= 1");
                if (k_map.data()[n] < 2.0 - 1e-12 || k_map.data()[n] > 28.0 + 1e-12)
                    fail("k_map range");
            }
        }
    }

    // Adaptive dt in (1/16, 1/4] at a=0.25, b=4.
    {
        const NcdfConfig cfg;
        for (int cases = 0; cases < 1000; ++cases) {
            ComplexGrid img(4, 4), rate(4, 4);
            for (auto& v : img.data()) v = std::complex<double>(sym(rng), sym(rng));
            for (auto& v : rate.data())
                v = std::complex<double>(100.0 * sym(rng), sym(rng));
            img(0, 0) += std::complex<double>(2.0, 0.0);
            const double dt = adaptive_timestep(img, rate, cfg);
            if (!(dt > 0.0625 && dt <= 0.25)) fail("dt range");
        }
    }

    // CNRe affine invariance.
    {
        RegionSpec regions;
        regions.inclusion_mask = ScalarGrid(8, 8, 0.0);
        regions.background_mask = ScalarGrid(8, 8, 0.0);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                regions.inclusion_mask(i, j) = 1.0;
                regions.background_mask(i + 4, j + 4) = 1.0;
            }
        for (int cases = 0; cases < 1000; ++cases) {
            const ScalarGrid img = random_grid(8, 8, 5000 + cases);
            const double a = sym(rng) * 3.0 + (sym(rng) >= 0 ? 0.5 : -0.5);
            const double b = 10.0 * sym(rng);
            ScalarGrid scaled(8, 8);
            for (std::size_t n = 0; n < img.size(); ++n)
                scaled.data()[n] = a * img.data()[n] + b;
            const double base = cnre(img, regions);
            const double after = cnre(scaled, regions);
            if (std::abs(after - base) > 1e-8 * std::max(1.0, std::abs(base)))
                fail("cnre affine invariance");
        }
    }

    // PRE scale law: scaling estimate and truth together leaves PRE fixed.
    {
        const ScalarGrid mask = full_mask(6, 6);
        for (int cases = 0; cases < 1000; ++cases) {
            ScalarGrid truth = random_grid(6, 6, 9000 + cases);
            for (double& v : truth) v += 3.0;
            const ScalarGrid est = random_grid(6, 6, 9500 + cases);
            const double s = unit(rng) * 99.0 + 1.0;
            ScalarGrid est2(6, 6), truth2(6, 6);
            for (std::size_t n = 0; n < est.size(); ++n) {
                est2.data()[n] = s * est.data()[n];
                truth2.data()[n] = s * truth.data()[n];
            }
            const double p1 = pre(est, truth, mask).percent;
            const double p2 = pre(est2, truth2, mask).percent;
            if (std::abs(p1 - p2) > 1e-8 * std::max(1.0, std::abs(p1)))
                fail("pre scale law");
        }
    }

    // Pressure linearity in K.
    {
        for (int cases = 0; cases < 1000; ++cases) {
            const ScalarGrid e_t = random_grid(4, 4, 12000 + cases);
            const ScalarGrid e_inf = random_grid(4, 4, 12500 + cases);
            PoroConfig c1, c2;
            c1.compression_modulus_k = unit(rng) * 1e5 + 1.0;
            c2.compression_modulus_k = 2.0 * c1.compression_modulus_k;
            const ScalarGrid p1 = compute_pressure(e_t, e_inf, c1);
            const ScalarGrid p2 = compute_pressure(e_t, e_inf, c2);
            for (std::size_t n = 0; n < p1.size(); ++n)
                if (p2.data()[n] != 2.0 * p1.data()[n]) fail("pressure K linearity");
        }
    }

    report(4, ok, "property suites over 1000+ cases each",
           ok ? "gain, variance, |D|, k_map, dt, cnre, pre, K linearity"
              : "first violation: " + first_violation);
}

// ---- criterion 5: poro-estimator analytics ------------------------------

void run_poro_criterion() {
    bool ok = true;
    std::string detail;

    PhantomConfig pc;
    const PhantomState now = generate_phantom(pc, 36.0);
    const PhantomState steady = generate_phantom(pc, 100.0 * pc.tau);
    PoroConfig cfg;
    cfg.compression_modulus_k = compression_modulus(pc);
    cfg.center_row = 64;
    cfg.center_col = 64;

    const ScalarGrid p = compute_pressure(now.volumetric, steady.volumetric, cfg);
    double worst_p = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n)
        worst_p = std::max(worst_p, std::abs(p.data()[n] - now.pressure_truth.data()[n]));
    const double p_rel = worst_p / grid_max_abs(now.pressure_truth);
    if (p_rel > 1e-6) ok = false;
    detail += "pressure rel err " + fmt(p_rel);

    const auto velocity_err = [](double radius) {
        PhantomConfig big;
        big.rows = big.cols = static_cast<std::size_t>(8.0 * radius);
        big.center_row = big.center_col = 4.0 * radius;
        big.inclusion_radius = radius;
        const PhantomState st = generate_phantom(big, 36.0);
        PoroConfig pcfg;
        pcfg.compression_modulus_k = compression_modulus(big);
        pcfg.center_row = pcfg.center_col = static_cast<std::size_t>(4.0 * radius);
        const ScalarGrid v = compute_velocity(st.pressure_truth, pcfg);
        double worst = 0.0;
        const double scale = grid_max_abs(st.velocity_truth);
        for (std::size_t i = 0; i < big.rows; ++i)
            for (std::size_t j = 0; j < big.cols; ++j) {
                const double R = std::hypot(static_cast<double>(i) - big.center_row,
                                            static_cast<double>(j) - big.center_col);
                if (R < 0.5 * radius || R > 2.0 * radius) continue;
                worst = std::max(worst,
                                 std::abs(v(i, j) - st.velocity_truth(i, j)) / scale);
            }
        return worst;
    };
    const double coarse = velocity_err(16.0);
    const double fine = velocity_err(32.0);
    const double ratio = coarse / fine;
    if (ratio < 3.0) ok = false;
    detail += ", velocity refinement ratio " + fmt(ratio);

    const ScalarGrid v = compute_velocity(now.pressure_truth, cfg);
    if (v(64, 64) != 0.0) ok = false;

    std::vector<StrainFrame> frames = {{36.0, now.volumetric},
                                       {100.0 * pc.tau, steady.volumetric}};
    const std::vector<PoroResult> series = estimate_poro_series(frames, cfg);
    for (double x : series[1].pressure)
        if (x != 0.0) ok = false;
    detail += ", center v and steady p exact zeros";

    report(5, ok, "poro-estimator analytics", detail);
}

// ---- criterion 6: noise-model calibration --------------------------------

void run_noise_criterion() {
    bool ok = true;
    std::string detail;

    PhantomConfig pc;
    const ScalarGrid truth = generate_phantom(pc, 36.0).lateral;
    double worst_snr_err = 0.0;
    for (double want : {30.0, 40.0, 50.0, 60.0})
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            NoiseConfig cfg;
            cfg.snr_db = want;
            cfg.am_sigma = 0.0;
            cfg.seed = seed;
            const double got = measure_snr(truth, corrupt(truth, cfg).noisy);
            worst_snr_err = std::max(worst_snr_err, std::abs(got - want));
        }
    if (worst_snr_err >= 0.5) ok = false;
    detail += "worst SNR error " + fmt(worst_snr_err) + " dB";

    double worst_am = 0.0;
    const ScalarGrid flat(100, 100, 1.0);
    for (std::uint64_t seed : {4ULL, 5ULL, 6ULL}) {
        NoiseConfig cfg;
        cfg.snr_db = std::numeric_limits<double>::infinity();
        cfg.am_sigma = 0.1;
        cfg.seed = seed;
        worst_am = std::max(worst_am,
                            std::abs(grid_mean(corrupt(flat, cfg).am_field) - 1.0));
    }
    if (worst_am >= 0.01) ok = false;
    detail += ", worst AM mean offset " + fmt(worst_am);

    NoiseConfig cfg;
    cfg.seed = 99;
    const NoiseRealization a = corrupt(truth, cfg);
    const NoiseRealization b = corrupt(truth, cfg);
    const bool deterministic = a.noisy == b.noisy && a.am_field == b.am_field &&
                               a.additive_field == b.additive_field;
    if (!deterministic) ok = false;
    detail += deterministic ? ", per-seed outputs bit-identical"
                            : ", determinism violated";

    report(6, ok, "noise-model calibration", detail);
}

// ---- criterion 7: timing ordering on 128x128 ------------------------------

void run_timing_criterion() {
    PhantomConfig pc;
    const ScalarGrid truth = generate_phantom(pc, 36.0).lateral;
    NoiseConfig nc;
    nc.seed = 12;
    const ScalarGrid noisy = corrupt(truth, nc).noisy;

    const auto time_filter = [&](FilterTag tag) {
        FilterMethod m;
        m.tag = tag;
        std::vector<double> runs;
        for (int rep = 0; rep < 3; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const ScalarGrid out = apply_filter(noisy, m);
            runs.push_back(now_seconds(start));
            if (out.size() != noisy.size()) runs.back() = -1.0;
        }
        return median_of(runs);
    };

    const double t_median = time_filter(FilterTag::median);
    const double t_kalman = time_filter(FilterTag::kalman);
    const double t_ncdf = time_filter(FilterTag::ncdf);
    const double t_proposed = time_filter(FilterTag::proposed);

    const bool ordering = t_median < t_kalman && t_kalman < t_ncdf && t_ncdf <= t_proposed;
    const bool budget = t_proposed < 2.0;
    report(7, ordering && budget, "single-image timing ordering",
           "median " + fmt(t_median) + " s < kalman " + fmt(t_kalman) + " s < ncdf " +
               fmt(t_ncdf) + " s <= proposed " + fmt(t_proposed) + " s");
}

// ---- criterion 8: bench and plot determinism ------------------------------

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

void run_determinism_criterion() {
    BenchConfig cfg;
    cfg.phantom_cfg.rows = 48;
    cfg.phantom_cfg.cols = 48;
    cfg.phantom_cfg.center_row = 24.0;
    cfg.phantom_cfg.center_col = 24.0;
    cfg.phantom_cfg.inclusion_radius = 6.0;
    cfg.snr_db = {30.0, 40.0};
    cfg.seeds = {1, 2};
    cfg.methods = {FilterTag::median, FilterTag::proposed};
    cfg.times = {36.0};

    cfg.out_dir = (fs::temp_directory_path() / "poroflow_acceptance_det1").string();
    const BenchResult r1 = run_bench(cfg);
    cfg.out_dir = (fs::temp_directory_path() / "poroflow_acceptance_det2").string();
    const BenchResult r2 = run_bench(cfg);

    const std::vector<std::string> a = read_lines(r1.rows_csv_path);
    const std::vector<std::string> b = read_lines(r2.rows_csv_path);
    bool rows_equal = a.size() == b.size() && !a.empty();
    if (rows_equal)
        for (std::size_t n = 0; n < a.size(); ++n)
            if (a[n].substr(0, a[n].rfind(',')) != b[n].substr(0, b[n].rfind(',')))
                rows_equal = false;

    const std::vector<BenchRow> rows1 = parse_bench_csv(r1.rows_csv_path);
    const std::vector<BenchRow> rows2 = parse_bench_csv(r2.rows_csv_path);
    const std::string svg1 = render_plot(rows1, "lateral_strain", "cnre");
    const std::string svg2 = render_plot(rows2, "lateral_strain", "cnre");
    const bool svg_equal = !svg1.empty() && svg1 == svg2;

    report(8, rows_equal && svg_equal, "bench and plot determinism",
           std::string("rows.csv ") + (rows_equal ? "matches" : "differs") +
               " modulo wall_time, SVG " + (svg_equal ? "byte-identical" : "differs"));
}

}  // namespace

int main() {
    std::cout << "poroflow acceptance suite (version " << kVersion << ")" << std::endl;
    run_sweep_criteria();
    run_oracle_criterion();
    run_property_criterion();
    run_poro_criterion();
    run_noise_criterion();
    run_timing_criterion();
    run_determinism_criterion();
    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures;
}

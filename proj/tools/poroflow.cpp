#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poroflow/poroflow.hpp"

namespace {

using namespace poroflow;

std::string fmt(double v, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

void require_known_keys(const ConfigMap& cm, std::initializer_list<const char*> known,
                        const std::string& what) {
    for (const auto& [key, value] : cm.values()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError(what + ": unknown key '" + key + "'");
    }
}

PhantomConfig phantom_config_from(const ConfigMap& cm) {
    require_known_keys(cm,
                       {"rows", "cols", "center_row", "center_col", "inclusion_radius",
                        "E_b", "E_i", "nu_b", "nu_i", "k_b", "k_i", "applied_strain",
                        "tau", "times"},
                       "phantom config");
    PhantomConfig cfg;
    cfg.rows = static_cast<std::size_t>(cm.get_double("rows", static_cast<double>(cfg.rows)));
    cfg.cols = static_cast<std::size_t>(cm.get_double("cols", static_cast<double>(cfg.cols)));
    cfg.center_row = cm.get_double("center_row", static_cast<double>(cfg.rows) / 2.0);
    cfg.center_col = cm.get_double("center_col", static_cast<double>(cfg.cols) / 2.0);
    cfg.inclusion_radius = cm.get_double("inclusion_radius", cfg.inclusion_radius);
    cfg.E_b = cm.get_double("E_b", cfg.E_b);
    cfg.E_i = cm.get_double("E_i", cfg.E_i);
    cfg.nu_b = cm.get_double("nu_b", cfg.nu_b);
    cfg.nu_i = cm.get_double("nu_i", cfg.nu_i);
    cfg.k_b = cm.get_double("k_b", cfg.k_b);
    cfg.k_i = cm.get_double("k_i", cfg.k_i);
    cfg.applied_strain = cm.get_double("applied_strain", cfg.applied_strain);
    cfg.tau = cm.get_double("tau", cfg.tau);
    cfg.times = cm.get_double_list("times", cfg.times);
    cfg.validate();
    return cfg;
}

FilterMethod filter_method_from(FilterTag tag, const std::string& params_path) {
    FilterMethod m;
    m.tag = tag;
    if (params_path.empty()) return m;
    const ConfigMap cm = load_config_file(params_path);
    require_known_keys(cm,
                       {"median_size", "window_wk", "block_size", "block_kernel_sigma",
                        "enable_detrend", "theta", "k_max", "k_min", "kernel_n",
                        "kernel_sigma", "a", "b", "max_iters", "rel_change_tol"},
                       "filter params");
    m.median_size = static_cast<int>(cm.get_double("median_size", m.median_size));
    m.kalman_cfg.window_wk =
        static_cast<int>(cm.get_double("window_wk", m.kalman_cfg.window_wk));
    m.kalman_cfg.block_size =
        static_cast<int>(cm.get_double("block_size", m.kalman_cfg.block_size));
    m.kalman_cfg.block_kernel_sigma =
        cm.get_double("block_kernel_sigma", m.kalman_cfg.block_kernel_sigma);
    m.kalman_cfg.enable_detrend = cm.get_double("enable_detrend", 0.0) != 0.0;
    m.ncdf_cfg.theta = cm.get_double("theta", m.ncdf_cfg.theta);
    m.ncdf_cfg.k_max = cm.get_double("k_max", m.ncdf_cfg.k_max);
    m.ncdf_cfg.k_min = cm.get_double("k_min", m.ncdf_cfg.k_min);
    m.ncdf_cfg.kernel_n = static_cast<int>(cm.get_double("kernel_n", m.ncdf_cfg.kernel_n));
    m.ncdf_cfg.kernel_sigma = cm.get_double("kernel_sigma", m.ncdf_cfg.kernel_sigma);
    m.ncdf_cfg.a = cm.get_double("a", m.ncdf_cfg.a);
    m.ncdf_cfg.b = cm.get_double("b", m.ncdf_cfg.b);
    m.ncdf_cfg.max_iters = static_cast<int>(cm.get_double("max_iters", m.ncdf_cfg.max_iters));
    m.ncdf_cfg.rel_change_tol = cm.get_double("rel_change_tol", m.ncdf_cfg.rel_change_tol);
    m.validate();
    return m;
}

BenchConfig bench_config_from(const ConfigMap& cm) {
    require_known_keys(cm,
                       {"snr_db", "am_sigma", "am_corr_len", "seeds", "methods", "times",
                        "k_pa", "out_dir", "median_size", "rows", "cols", "center_row",
                        "center_col", "inclusion_radius", "E_b", "E_i", "nu_b", "nu_i",
                        "applied_strain", "tau"},
                       "bench config");
    BenchConfig cfg;
    cfg.snr_db = cm.get_double_list("snr_db", cfg.snr_db);
    cfg.am_sigma = cm.get_double_list("am_sigma", cfg.am_sigma);
    cfg.am_corr_len = cm.get_double("am_corr_len", cfg.am_corr_len);
    cfg.seeds = cm.get_u64_list("seeds", cfg.seeds);
    if (cm.has("methods")) {
        cfg.methods.clear();
        for (const std::string& name : cm.get_string_list("methods", {}))
            cfg.methods.push_back(parse_filter_tag(name));
    }
    cfg.times = cm.get_double_list("times", cfg.times);
    cfg.k_pa = cm.get_double("k_pa", cfg.k_pa);
    cfg.out_dir = cm.get_string("out_dir", cfg.out_dir);
    cfg.method_params.median_size =
        static_cast<int>(cm.get_double("median_size", cfg.method_params.median_size));

    PhantomConfig& ph = cfg.phantom_cfg;
    ph.rows = static_cast<std::size_t>(cm.get_double("rows", static_cast<double>(ph.rows)));
    ph.cols = static_cast<std::size_t>(cm.get_double("cols", static_cast<double>(ph.cols)));
    ph.center_row = cm.get_double("center_row", static_cast<double>(ph.rows) / 2.0);
    ph.center_col = cm.get_double("center_col", static_cast<double>(ph.cols) / 2.0);
    ph.inclusion_radius = cm.get_double("inclusion_radius", ph.inclusion_radius);
    ph.E_b = cm.get_double("E_b", ph.E_b);
    ph.E_i = cm.get_double("E_i", ph.E_i);
    ph.nu_b = cm.get_double("nu_b", ph.nu_b);
    ph.nu_i = cm.get_double("nu_i", ph.nu_i);
    ph.applied_strain = cm.get_double("applied_strain", ph.applied_strain);
    ph.tau = cm.get_double("tau", ph.tau);
    cfg.validate();
    return cfg;
}

GridFormat parse_format(const std::string& name) {
    if (name == "binary") return GridFormat::binary;
    if (name == "text") return GridFormat::text;
    throw ConfigError("unknown grid format '" + name + "' (valid: binary, text)");
}

struct ManifestFrame {
    double t = 0.0;
    std::string axial_path;
    std::string lateral_path;
};

std::vector<ManifestFrame> parse_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open frames manifest '" + path + "'");
    std::vector<ManifestFrame> frames;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = poroflow::detail::trim(line);
        if (line.empty()) continue;
        const auto parts = poroflow::detail::split_commas(line);
        if (parts.size() != 3)
            throw ConfigError("manifest line " + std::to_string(line_no) +
                              ": expected 't_seconds, axial_path, lateral_path'");
        ManifestFrame f;
        f.t = poroflow::detail::parse_double(parts[0], "t_seconds");
        f.axial_path = parts[1];
        f.lateral_path = parts[2];
        if (f.axial_path.empty() || f.lateral_path.empty())
            throw ConfigError("manifest line " + std::to_string(line_no) +
                              ": empty grid path");
        frames.push_back(std::move(f));
    }
    if (frames.empty()) throw ConfigError("frames manifest '" + path + "' lists no frames");
    return frames;
}

std::pair<std::size_t, std::size_t> parse_center(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ConfigError("--center expects 'row,col', got '" + text + "'");
    const auto row = poroflow::detail::parse_u64(
        poroflow::detail::trim(text.substr(0, comma)), "center row");
    const auto col = poroflow::detail::parse_u64(
        poroflow::detail::trim(text.substr(comma + 1)), "center col");
    return {static_cast<std::size_t>(row), static_cast<std::size_t>(col)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strain elastogram filtering and poroelastic estimation"};
    app.set_version_flag("--version", poroflow::kVersion);
    app.require_subcommand(1);
    int rc = 0;

    // phantom
    auto* cmd_phantom = app.add_subcommand("phantom", "generate analytic phantom grids");
    std::string ph_config, ph_out_dir, ph_format = "binary";
    double ph_time = 0.0;
    cmd_phantom->add_option("--config", ph_config, "phantom config file (key=value)");
    cmd_phantom->add_option("--time", ph_time, "time in seconds")->required();
    cmd_phantom->add_option("--out-dir", ph_out_dir, "output directory")->required();
    cmd_phantom->add_option("--format", ph_format, "grid format: binary|text");
    cmd_phantom->callback([&] {
        const PhantomConfig cfg =
            ph_config.empty() ? PhantomConfig{} : phantom_config_from(load_config_file(ph_config));
        const GridFormat format = parse_format(ph_format);
        const PhantomState st = generate_phantom(cfg, ph_time);
        namespace fs = std::filesystem;
        fs::create_directories(ph_out_dir);
        const auto put = [&](const char* name, const ScalarGrid& g) {
            write_grid(g, (fs::path(ph_out_dir) / name).string(), format);
        };
        put("axial.grid", st.axial);
        put("lateral.grid", st.lateral);
        put("volumetric.grid", st.volumetric);
        put("pressure_truth.grid", st.pressure_truth);
        put("velocity_truth.grid", st.velocity_truth);
        put("mask.grid", inclusion_mask(cfg));
    });

    // corrupt
    auto* cmd_corrupt = app.add_subcommand("corrupt", "add AM and additive noise to a grid");
    std::string co_in, co_out, co_out_am, co_out_additive;
    NoiseConfig co_cfg;
    cmd_corrupt->add_option("--in", co_in, "input truth grid")->required();
    cmd_corrupt->add_option("--snr-db", co_cfg.snr_db, "additive noise SNR in dB (inf: none)");
    cmd_corrupt->add_option("--am-sigma", co_cfg.am_sigma, "AM log-amplitude sigma");
    cmd_corrupt->add_option("--am-corr-len", co_cfg.am_corr_len, "AM correlation length, px");
    cmd_corrupt->add_option("--seed", co_cfg.seed, "RNG seed");
    cmd_corrupt->add_option("--out", co_out, "output noisy grid")->required();
    cmd_corrupt->add_option("--out-am", co_out_am, "also write the AM field");
    cmd_corrupt->add_option("--out-additive", co_out_additive, "also write the additive field");
    cmd_corrupt->callback([&] {
        const ScalarGrid truth = read_grid(co_in);
        const NoiseRealization nz = corrupt(truth, co_cfg);
        write_grid(nz.noisy, co_out);
        if (!co_out_am.empty()) write_grid(nz.am_field, co_out_am);
        if (!co_out_additive.empty()) write_grid(nz.additive_field, co_out_additive);
    });

    // filter
    auto* cmd_filter = app.add_subcommand("filter", "denoise a strain grid");
    std::string fi_method, fi_in, fi_out, fi_params, fi_meta;
    cmd_filter->add_option("--method", fi_method, "median|kalman|ncdf|proposed")
        ->required()
        ->check(CLI::IsMember({"median", "kalman", "ncdf", "proposed"}));
    cmd_filter->add_option("--in", fi_in, "input noisy grid")->required();
    cmd_filter->add_option("--out", fi_out, "output filtered grid")->required();
    cmd_filter->add_option("--params", fi_params, "filter params file (key=value)");
    cmd_filter->add_option("--emit-meta", fi_meta, "write iteration metadata here");
    cmd_filter->callback([&] {
        const FilterMethod method = filter_method_from(parse_filter_tag(fi_method), fi_params);
        const ScalarGrid input = read_grid(fi_in);
        ScalarGrid output;
        int iterations = 1;
        std::vector<double> dt_history;
        if (method.tag == FilterTag::ncdf || method.tag == FilterTag::proposed) {
            const ScalarGrid staged = method.tag == FilterTag::proposed
                                          ? apply_kalman(input, method.kalman_cfg)
                                          : input;
            NcdfResult res = run_ncdf(staged, method.ncdf_cfg);
            output = std::move(res.image);
            iterations = res.iterations;
            dt_history = std::move(res.dt_history);
        } else {
            output = apply_filter(input, method);
        }
        write_grid(output, fi_out);
        if (!fi_meta.empty()) {
            std::ofstream meta(fi_meta, std::ios::binary);
            if (!meta) throw ConfigError("cannot write meta file '" + fi_meta + "'");
            meta << "method=" << fi_method << '\n';
            meta << "iterations=" << iterations << '\n';
            meta << "dt_history=";
            for (std::size_t i = 0; i < dt_history.size(); ++i)
                meta << (i ? "," : "") << fmt(dt_history[i], "%.17g");
            meta << '\n';
        }
    });

    // poro
    auto* cmd_poro = app.add_subcommand("poro", "pressure/velocity from strain frames");
    std::string po_manifest, po_center = "", po_out_dir;
    double po_k = 0.0;
    std::ptrdiff_t po_steady = -1;
    cmd_poro->add_option("--frames", po_manifest,
                         "manifest: 't_seconds, axial_path, lateral_path' per line")
        ->required();
    cmd_poro->add_option("--k-pa", po_k, "compression modulus K in Pa")->required();
    cmd_poro->add_option("--center", po_center, "radial origin 'row,col'")->required();
    cmd_poro->add_option("--steady-index", po_steady,
                         "frame index acting as eps(R,inf); negative counts from the end");
    cmd_poro->add_option("--out-dir", po_out_dir, "output directory")->required();
    cmd_poro->callback([&] {
        const std::vector<ManifestFrame> manifest = parse_manifest(po_manifest);
        PoroConfig cfg;
        cfg.compression_modulus_k = po_k;
        std::tie(cfg.center_row, cfg.center_col) = parse_center(po_center);
        cfg.steady_state_index = po_steady;
        std::vector<StrainFrame> frames;
        for (const ManifestFrame& m : manifest)
            frames.push_back(
                {m.t, volumetric_strain(read_grid(m.axial_path), read_grid(m.lateral_path))});
        const std::vector<PoroResult> results = estimate_poro_series(frames, cfg);
        namespace fs = std::filesystem;
        fs::create_directories(po_out_dir);
        for (const PoroResult& r : results) {
            const std::string tag = fmt(r.t, "%g");
            write_grid(r.pressure, (fs::path(po_out_dir) / ("pressure_" + tag + ".grid")).string());
            write_grid(r.velocity, (fs::path(po_out_dir) / ("velocity_" + tag + ".grid")).string());
        }
    });

    // metrics
    auto* cmd_metrics = app.add_subcommand("metrics", "CNRe and PRE for one estimate");
    std::string me_est, me_truth, me_inc, me_bg, me_pre_mask, me_out;
    std::string me_filter = "unknown", me_quantity = "unknown";
    double me_snr = std::numeric_limits<double>::quiet_NaN();
    double me_t = 0.0;
    bool me_signed = false;
    cmd_metrics->add_option("--est", me_est, "estimated grid")->required();
    cmd_metrics->add_option("--truth", me_truth, "ground-truth grid")->required();
    cmd_metrics->add_option("--inc-mask", me_inc, "inclusion mask grid")->required();
    cmd_metrics->add_option("--bg-mask", me_bg, "background mask grid")->required();
    cmd_metrics->add_option("--pre-mask", me_pre_mask,
                            "mask for PRE (default: whole grid)");
    cmd_metrics->add_option("--out", me_out, "output CSV")->required();
    cmd_metrics->add_option("--filter", me_filter, "label for the filter column");
    cmd_metrics->add_option("--snr-db", me_snr, "label for the snr_db column");
    cmd_metrics->add_option("--t", me_t, "label for the t_seconds column");
    cmd_metrics->add_option("--quantity", me_quantity, "label for the quantity column");
    cmd_metrics->add_flag("--signed", me_signed, "signed relative error instead of |.|");
    cmd_metrics->callback([&] {
        const ScalarGrid est = read_grid(me_est);
        const ScalarGrid truth = read_grid(me_truth);
        const RegionSpec regions{read_grid(me_inc), read_grid(me_bg)};
        const ScalarGrid pre_mask =
            me_pre_mask.empty() ? full_mask(est.rows(), est.cols()) : read_grid(me_pre_mask);
        const double contrast = cnre(est, regions);
        const PreResult pr = pre(est, truth, pre_mask, me_signed);
        std::ofstream out(me_out, std::ios::binary);
        if (!out) throw ConfigError("cannot write report '" + me_out + "'");
        out << "filter,snr_db,t_seconds,quantity,cnre,pre_percent,excluded_pixels\n";
        out << me_filter << ',' << fmt(me_snr, "%g") << ',' << fmt(me_t, "%g") << ','
            << me_quantity << ',' << fmt(contrast) << ',' << fmt(pr.percent) << ','
            << pr.excluded_pixels << '\n';
    });

    // bench
    auto* cmd_bench = app.add_subcommand("bench", "full phantom benchmark sweep");
    std::string be_config, be_out_dir;
    cmd_bench->add_option("--config", be_config, "bench config file (key=value)");
    cmd_bench->add_option("--out-dir", be_out_dir, "output directory (overrides config)");
    cmd_bench->callback([&] {
        BenchConfig cfg =
            be_config.empty() ? BenchConfig{} : bench_config_from(load_config_file(be_config));
        if (!be_out_dir.empty()) cfg.out_dir = be_out_dir;
        const BenchResult res = run_bench(cfg);
        std::cout << "rows: " << res.rows_csv_path << '\n';
        std::cout << "summary: " << res.summary_csv_path << '\n';
        std::cout << "meta: " << res.meta_path << '\n';
        std::cout << "rows_written: " << res.rows.size() << '\n';
        std::cout << "total_wall_s: " << fmt(res.total_wall_s, "%.3f") << '\n';
        if (res.failures > 0) {
            std::cerr << "bench: " << res.failures << " cell(s) failed; see rows.csv\n";
            rc = 1;
        }
    });

    // plot
    auto* cmd_plot = app.add_subcommand("plot", "render metric-vs-SNR curves as SVG");
    std::string pl_rows, pl_quantity, pl_metric = "cnre", pl_out;
    cmd_plot->add_option("rows_csv", pl_rows, "rows.csv from bench")->required();
    cmd_plot->add_option("--quantity", pl_quantity,
                         "lateral_strain|axial_strain|pressure|velocity")
        ->required();
    cmd_plot->add_option("--metric", pl_metric, "cnre|pre_percent");
    cmd_plot->add_option("--out", pl_out, "output SVG path")->required();
    cmd_plot->callback([&] { plot_curves(pl_rows, pl_quantity, pl_metric, pl_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const poroflow::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semidens/errors.hpp"
#include "semidens/estimator.hpp"
#include "semidens/index_selection.hpp"
#include "semidens/io.hpp"
#include "semidens/sim_harness.hpp"
#include "semidens/theory.hpp"

namespace {

using namespace semidens;

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;
    bool set = false;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (s.empty()) return g;
    std::istringstream is(s);
    char c1 = 0, c2 = 0;
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' ||
        g.count < 2 || !(g.hi > g.lo)) {
        throw CLI::ValidationError("--grid expects min:max:count with max > min, count >= 2");
    }
    g.set = true;
    return g;
}

std::pair<double, double> parse_range(const std::string& s) {
    std::istringstream is(s);
    double lo = 0, hi = 0;
    char c = 0;
    if (!(is >> lo >> c >> hi) || c != ':' || !(lo > 0.0) || !(hi > lo)) {
        throw CLI::ValidationError("--h-range expects lo:hi with 0 < lo < hi");
    }
    return {lo, hi};
}

// alpha resolution: a number or one of hj/ll/hg/auto1/auto2/auto3
struct ResolvedAlpha {
    double value;
    bool fallback = false;
    std::string note;
    MetaList trace;
};

ResolvedAlpha resolve_alpha_spec(const std::string& spec, std::span<const double> data) {
    if (spec == "hj") return {0.0};
    if (spec == "ll") return {1.0};
    if (spec == "hg") return {2.0};
    if (spec == "auto1") {
        try {
            const auto sel = alpha_hat_1(data);
            ResolvedAlpha r{sel.alpha};
            r.trace = {{"selector_h_bar", format_double(sel.h_bar)},
                       {"selector_c1_hat", format_double(sel.kernel_coeffs.c1)},
                       {"selector_c2_hat", format_double(sel.kernel_coeffs.c2)},
                       {"selector_c3_hat", format_double(sel.kernel_coeffs.c3)}};
            return r;
        } catch (const selector_degenerate_error& e) {
            return {2.0, true, std::string("selector auto1 degenerated (") + e.what() +
                                   "); using alpha=2"};
        }
    }
    if (spec == "auto2" || spec == "auto3") {
        try {
            const auto tr = pipeline(data, GaussianStart::fit_mle(data));
            ResolvedAlpha r{spec == "auto2" ? tr.alpha_hat_2 : tr.alpha_hat_3};
            r.trace = {{"selector_g_n1", format_double(tr.g_n1)},
                       {"selector_g_d1", format_double(tr.g_d1)},
                       {"selector_g_n2", format_double(tr.g_n2)},
                       {"selector_g_d2", format_double(tr.g_d2)},
                       {"selector_g_n3", format_double(tr.g_n3)},
                       {"selector_g_d3", format_double(tr.g_d3)},
                       {"selector_g_amsre", format_double(tr.g_amsre_star)},
                       {"selector_alpha_hat_2", format_double(tr.alpha_hat_2)},
                       {"selector_alpha_hat_3", format_double(tr.alpha_hat_3)}};
            return r;
        } catch (const std::exception& e) {
            return {2.0, true,
                    "selector " + spec + " degenerated (" + e.what() + "); using alpha=2"};
        }
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(spec, &pos);
        if (pos == spec.size()) return {v};
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--alpha must be a number or one of hj, ll, hg, auto1, auto2, auto3");
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

int cmd_estimate(const std::string& input, const std::string& alpha_spec,
                 const std::string& h_spec, const std::string& grid_spec,
                 const std::string& output) {
    const auto data = ingest(input);
    const auto start = GaussianStart::fit_mle(data);

    const auto ra = resolve_alpha_spec(alpha_spec, data);
    if (!ra.note.empty()) std::cerr << "warning: " << ra.note << "\n";

    double h = 0.0;
    std::string h_note;
    MetaList h_trace;
    if (h_spec == "auto") {
        try {
            const auto fb = h_final(data);
            h = fb.h;
            h_trace = {{"bandwidth_h_bar", format_double(fb.h_bar)},
                       {"bandwidth_alpha1", format_double(fb.alpha1)},
                       {"bandwidth_r_dagger", format_double(fb.r_dagger)}};
            if (fb.floored) {
                h_trace.emplace_back("bandwidth_floored", "true");
                std::cerr << "warning: bias-adjusted roughness was non-positive; "
                             "bandwidth clamped to the floor\n";
            }
        } catch (const selector_degenerate_error&) {
            // normal-reference bandwidth when the plug-in degenerates
            h = 1.06 * start.sigma() * std::pow(static_cast<double>(data.size()), -0.2);
            h_note = "plug-in bandwidth degenerated; using normal-reference h";
            std::cerr << "warning: " << h_note << "\n";
        }
    } else {
        try {
            std::size_t pos = 0;
            h = std::stod(h_spec, &pos);
            if (pos != h_spec.size()) throw std::invalid_argument(h_spec);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--bandwidth must be a positive number or 'auto'");
        }
        if (!(h > 0.0)) throw CLI::ValidationError("--bandwidth must be positive");
    }

    const EstimatorConfig cfg{ra.value, h, gaussian_kernel(), start};
    std::vector<double> grid;
    const auto gs = parse_grid(grid_spec);
    if (gs.set) {
        grid.resize(gs.count);
        for (std::size_t i = 0; i < gs.count; ++i) {
            grid[i] = gs.lo + (gs.hi - gs.lo) * static_cast<double>(i) /
                                  static_cast<double>(gs.count - 1);
        }
    } else {
        grid = default_grid(data, cfg);
    }
    const auto est = fhat_curve(data, cfg, std::move(grid));

    MetaList meta{
        {"command", "estimate"},
        {"input", input},
        {"n", std::to_string(data.size())},
        {"alpha_spec", alpha_spec},
        {"alpha", format_double(ra.value)},
        {"bandwidth_spec", h_spec},
        {"bandwidth", format_double(h)},
        {"mu_hat", format_double(start.mu())},
        {"sigma_hat", format_double(start.sigma())},
    };
    if (ra.fallback) meta.emplace_back("alpha_fallback", "true");
    if (!h_note.empty()) meta.emplace_back("bandwidth_fallback", "true");
    for (const auto& kv : ra.trace) meta.push_back(kv);
    for (const auto& kv : h_trace) meta.push_back(kv);

    std::ofstream file;
    write_curve_csv(open_output(file, output), meta, est.grid, est.values);
    return 0;
}

int cmd_select(const std::string& input, int method, const std::string& output) {
    const auto data = ingest(input);
    std::ofstream file;
    std::ostream& out = open_output(file, output);
    out << "key,value\n";
    const auto put = [&](const std::string& k, double v) {
        out << k << "," << format_double(v) << "\n";
    };
    try {
        if (method == 1) {
            const auto sel = alpha_hat_1(data);
            put("alpha_hat_1", sel.alpha);
            put("h_bar", sel.h_bar);
            put("c_bar_1", sel.moment_coeffs.c1);
            put("c_bar_2", sel.moment_coeffs.c2);
            put("c_bar_3", sel.moment_coeffs.c3);
            put("c_hat_1", sel.kernel_coeffs.c1);
            put("c_hat_2", sel.kernel_coeffs.c2);
            put("c_hat_3", sel.kernel_coeffs.c3);
        } else {
            const auto tr = pipeline(data, GaussianStart::fit_mle(data));
            put("n_tilde6", tr.n_tilde6);
            put("d_tilde6", tr.d_tilde6);
            put("beta_n1", tr.beta_n1);
            put("beta_d1", tr.beta_d1);
            put("beta_n2", tr.beta_n2);
            put("beta_d2", tr.beta_d2);
            put("beta_n3", tr.beta_n3);
            put("beta_d3", tr.beta_d3);
            put("beta_0", tr.beta_0);
            put("lambda_sq_67", tr.lambda_sq_67);
            put("kappa_sq_6", tr.kappa_sq_6);
            put("lambda_sq_45", tr.lambda_sq_45);
            put("kappa_sq_4", tr.kappa_sq_4);
            put("lambda_sq_23", tr.lambda_sq_23);
            put("kappa_sq_2", tr.kappa_sq_2);
            put("g_n1", tr.g_n1);
            put("g_d1", tr.g_d1);
            put("g_n2", tr.g_n2);
            put("g_d2", tr.g_d2);
            put("g_n3", tr.g_n3);
            put("g_d3", tr.g_d3);
            put("n_hat4", tr.n_hat4);
            put("d_hat4", tr.d_hat4);
            put("n_hat2", tr.n_hat2);
            put("d_hat2", tr.d_hat2);
            put("n_hat0", tr.n_hat0);
            put("d_hat0", tr.d_hat0);
            put("g_amsre_star", tr.g_amsre_star);
            put("n_star", tr.n_star);
            put("d_star", tr.d_star);
            put("alpha_hat_2", tr.alpha_hat_2);
            put("alpha_hat_3", tr.alpha_hat_3);
            put("alpha", method == 2 ? tr.alpha_hat_2 : tr.alpha_hat_3);
        }
    } catch (const selector_degenerate_error& e) {
        std::cerr << "warning: " << e.what() << "\n";
        out << "alpha_fallback,2\n";
        return 0;
    }
    return 0;
}

int cmd_ratio_table(const std::string& output, const std::string& format) {
    const auto rows = full_ratio_table();
    std::ofstream file;
    std::ostream& out = open_output(file, output);
    if (format == "long") {
        write_ratio_table_long(out, rows);
    } else {
        write_ratio_table_wide(out, rows);
    }
    return 0;
}

EstimatorSpec parse_estimator(const std::string& tok) {
    if (tok == "ftilde" || tok == "kde") return EstimatorSpec::traditional();
    if (tok == "hj") return EstimatorSpec::fixed(0.0);
    if (tok == "ll") return EstimatorSpec::fixed(1.0);
    if (tok == "hg") return EstimatorSpec::fixed(2.0);
    if (tok == "auto1") return EstimatorSpec::selector(1);
    if (tok == "auto2") return EstimatorSpec::selector(2);
    if (tok == "auto3") return EstimatorSpec::selector(3);
    try {
        std::size_t pos = 0;
        const double a = std::stod(tok, &pos);
        if (pos == tok.size()) return EstimatorSpec::fixed(a);
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("unknown estimator '" + tok +
                               "' (use ftilde, hj, ll, hg, auto1..3 or a number)");
}

int cmd_simulate(int density_id, std::size_t n, std::size_t reps, std::uint64_t seed,
                 const std::string& estimators, const std::string& h_range_spec,
                 bool long_running, const std::string& output) {
    if (long_running) {
        if (n == 0) n = 500;
        if (reps == 0) reps = 1000;
    } else {
        if (n == 0) n = 200;
        if (reps == 0) reps = 300;
    }
    const auto truth = marron_wand(density_id);

    std::pair<double, double> h_range;
    if (!h_range_spec.empty()) {
        h_range = parse_range(h_range_spec);
    } else {
        // bracket around the normal-reference rate for the true scale
        const double s0 = std::sqrt(truth.kl_gaussian().sigma0_sq);
        const double href = 1.06 * s0 * std::pow(static_cast<double>(n), -0.2);
        h_range = {0.2 * href, 2.5 * href};
    }

    std::vector<EstimatorSpec> specs;
    std::stringstream ss(estimators);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) specs.push_back(parse_estimator(tok));
    }
    if (specs.empty()) throw CLI::ValidationError("--estimators list is empty");

    std::vector<SimResult> results;
    for (const auto& spec : specs) {
        results.push_back(grid_search(truth, spec, n, reps, seed, h_range));
    }

    write_sim_summary(std::cout, results);
    if (!output.empty()) {
        std::ofstream file;
        write_sim_csv(open_output(file, output), results);
    } else {
        write_sim_csv(std::cout, results);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "semidens: semiparametric density estimation with a parametric start and a\n"
        "local L2 multiplicative adjustment, plus its AMISE theory tables, data-driven\n"
        "index selectors and a Monte Carlo MISE benchmark.\n"
        "Set SEMIDENS_WORKERS to control simulation parallelism."};
    app.require_subcommand(1);
    app.set_config("--config");

    // estimate
    std::string in_path, out_path, alpha_spec = "hg", h_spec = "auto", grid_spec;
    auto* est = app.add_subcommand("estimate", "evaluate the density estimate on a grid");
    est->add_option("--input", in_path, "input sample, one value per line or 1-column CSV")
        ->required();
    est->add_option("--alpha", alpha_spec,
                    "index: number, hj (0), ll (1), hg (2), or auto1/auto2/auto3");
    est->add_option("--bandwidth", h_spec, "bandwidth: number or 'auto' (plug-in)");
    est->add_option("--grid", grid_spec, "evaluation grid min:max:count");
    est->add_option("--output", out_path, "output CSV (default stdout)");

    // select
    std::string sel_in, sel_out;
    int sel_method = 1;
    auto* sel = app.add_subcommand("select", "run a data-driven index selector");
    sel->add_option("--input", sel_in, "input sample")->required();
    sel->add_option("--method", sel_method, "selector: 1 (direct), 2 or 3 (functional)")
        ->check(CLI::Range(1, 3));
    sel->add_option("--output", sel_out, "output CSV (default stdout)");

    // ratio-table
    std::string rt_out, rt_format = "wide";
    auto* rt = app.add_subcommand("ratio-table",
                                  "squared-bias ratio tables for the density catalogue");
    rt->add_option("--output", rt_out, "output CSV (default stdout)");
    rt->add_option("--format", rt_format, "wide (default) or long")
        ->check(CLI::IsMember({"wide", "long"}));

    // simulate
    int sim_density = 1;
    std::size_t sim_n = 0, sim_reps = 0;
    std::uint64_t sim_seed = 20040501;
    std::string sim_estimators = "ftilde,hg", sim_hrange, sim_out;
    bool sim_long = false;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo min-MISE benchmark");
    sim->add_option("--density", sim_density, "Marron-Wand density id (1..15)")
        ->check(CLI::Range(1, 15));
    sim->add_option("--n", sim_n, "sample size (default 200, 500 with --long)");
    sim->add_option("--reps", sim_reps, "replications (default 300, 1000 with --long)");
    sim->add_option("--seed", sim_seed, "master seed");
    sim->add_option("--estimators", sim_estimators,
                    "comma list: ftilde, hj, ll, hg, auto1..3, or numeric alpha");
    sim->add_option("--h-range", sim_hrange, "bandwidth search interval lo:hi");
    sim->add_flag("--long", sim_long, "full-scale run (n=500, reps=1000)");
    sim->add_option("--output", sim_out, "CSV destination (default stdout)");

    // zoo
    bool zoo_dump = false;
    std::string zoo_out;
    auto* zoo = app.add_subcommand("zoo", "the mixture catalogue");
    zoo->add_flag("--dump", zoo_dump, "dump the catalogue as CSV");
    zoo->add_option("--output", zoo_out, "output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) {
            return cmd_estimate(in_path, alpha_spec, h_spec, grid_spec, out_path);
        }
        if (sel->parsed()) return cmd_select(sel_in, sel_method, sel_out);
        if (rt->parsed()) return cmd_ratio_table(rt_out, rt_format);
        if (sim->parsed()) {
            return cmd_simulate(sim_density, sim_n, sim_reps, sim_seed, sim_estimators,
                                sim_hrange, sim_long, sim_out);
        }
        if (zoo->parsed()) {
            if (!zoo_dump) {
                std::cerr << "zoo: nothing to do (use --dump)\n";
                return 1;
            }
            std::ofstream file;
            write_zoo_csv(open_output(file, zoo_out));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

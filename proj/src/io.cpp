#include "semidens/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "semidens/errors.hpp"

namespace semidens {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> ingest_stream(std::istream& in, const std::string& name) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (!t.empty() && t.back() == ',') t.pop_back();  // single-column CSV rows
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        const bool parsed = end != t.c_str() && trim(end).empty();
        if (!parsed) {
            if (first_content) {  // header row
                first_content = false;
                continue;
            }
            throw ingest_error(name + ":" + std::to_string(lineno) +
                               ": not a number: '" + t + "'");
        }
        if (!std::isfinite(v)) {
            throw ingest_error(name + ":" + std::to_string(lineno) +
                               ": non-finite value '" + t + "'");
        }
        first_content = false;
        out.push_back(v);
    }
    if (out.empty()) {
        throw ingest_error(name + ": no numeric data found");
    }
    return out;
}

std::vector<double> ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ingest_error("cannot open input file: " + path);
    return ingest_stream(in, path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_curve_csv(std::ostream& out, const MetaList& meta,
                     const std::vector<double>& grid, const std::vector<double>& values) {
    for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
    out << "x,fhat\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_double(grid[i]) << "," << format_double(values[i]) << "\n";
    }
}

namespace {

std::string ratio4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void write_ratio_table_wide(std::ostream& out, const std::vector<RatioRow>& rows) {
    out << "density_id,ratio_alpha0,ratio_alpha1,ratio_alpha2,ratio_alpha_opt,alpha_o\n";
    for (const auto& r : rows) {
        out << r.density_id << "," << ratio4(r.ratio_alpha0) << "," << ratio4(r.ratio_alpha1)
            << "," << ratio4(r.ratio_alpha2) << "," << ratio4(r.ratio_alpha_opt) << ",";
        if (r.alpha_o) out << ratio4(*r.alpha_o);
        out << "\n";
    }
}

void write_ratio_table_long(std::ostream& out, const std::vector<RatioRow>& rows) {
    out << "density_id,alpha,ratio,alpha_o\n";
    for (const auto& r : rows) {
        const std::string ao = r.alpha_o ? ratio4(*r.alpha_o) : "";
        const std::pair<std::string, double> cells[] = {
            {"0", r.ratio_alpha0},
            {"1", r.ratio_alpha1},
            {"2", r.ratio_alpha2},
            {"alpha_o", r.ratio_alpha_opt},
        };
        for (const auto& [a, v] : cells) {
            if (a == "alpha_o" && !r.alpha_o) continue;
            out << r.density_id << "," << a << "," << ratio4(v) << "," << ao << "\n";
        }
    }
}

void write_sim_csv(std::ostream& out, const std::vector<SimResult>& results) {
    out << "density_id,estimator,h,mise,se,n,reps,seed\n";
    for (const auto& res : results) {
        for (std::size_t k = 0; k < res.h_grid.size(); ++k) {
            out << res.density_id << "," << res.estimator_label << ","
                << format_double(res.h_grid[k]) << "," << format_double(res.mise[k]) << ","
                << format_double(res.se[k]) << "," << res.n << "," << res.reps << ","
                << res.seed << "\n";
        }
    }
}

void write_sim_summary(std::ostream& out, const std::vector<SimResult>& results) {
    if (results.empty()) return;
    out << "min MISE x 1e5 (SE), " << results.front().density_id
        << ", n=" << results.front().n << ", reps=" << results.front().reps << "\n";
    for (const auto& res : results) {
        std::string notes;
        if (res.boundary_warning) notes += "  [boundary]";
        if (res.failures) notes += "  [failures=" + std::to_string(res.failures) + "]";
        if (res.fallbacks) notes += "  [fallbacks=" + std::to_string(res.fallbacks) + "]";
        char buf[120];
        std::snprintf(buf, sizeof(buf), "  %-12s %8.0f (%.0f)  at h=%.4f",
                      res.estimator_label.c_str(), res.min_mise * 1e5, res.se_at_min * 1e5,
                      res.h_at_min);
        out << buf << notes << "\n";
    }
}

void write_zoo_csv(std::ostream& out) {
    out << "id,component,weight,mean,sd\n";
    for (int id = 1; id <= 15; ++id) {
        const auto mw = marron_wand(id);
        for (std::size_t c = 0; c < mw.components(); ++c) {
            out << id << "," << c + 1 << "," << format_double(mw.weights()[c]) << ","
                << format_double(mw.means()[c]) << "," << format_double(mw.sds()[c]) << "\n";
        }
    }
}

}  // namespace semidens

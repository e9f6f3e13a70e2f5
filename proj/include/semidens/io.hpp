#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "semidens/sim_harness.hpp"
#include "semidens/theory.hpp"

namespace semidens {

// Reads one number per line, or a single-column CSV whose first line may be
// a header. Throws ingest_error with a line number for anything
// non-numeric, NaN or infinite.
std::vector<double> ingest(const std::string& path);
std::vector<double> ingest_stream(std::istream& in, const std::string& name);

// Fixed "%.12g" rendering so equal inputs produce byte-identical files.
std::string format_double(double v);

using MetaList = std::vector<std::pair<std::string, std::string>>;

// "# key=value" preamble followed by "x,fhat" rows.
void write_curve_csv(std::ostream& out, const MetaList& meta,
                     const std::vector<double>& grid, const std::vector<double>& values);

// Wide layout, one row per density:
//   density_id,ratio_alpha0,ratio_alpha1,ratio_alpha2,ratio_alpha_opt,alpha_o
// alpha_o is left empty for model densities. Long layout:
//   density_id,alpha,ratio,alpha_o
void write_ratio_table_wide(std::ostream& out, const std::vector<RatioRow>& rows);
void write_ratio_table_long(std::ostream& out, const std::vector<RatioRow>& rows);

// density_id,estimator,h,mise,se,n,reps,seed rows for every evaluated h.
void write_sim_csv(std::ostream& out, const std::vector<SimResult>& results);

// Plain-text summary: one line per estimator with min-MISE x 1e5 and its
// standard error in parentheses.
void write_sim_summary(std::ostream& out, const std::vector<SimResult>& results);

// id,component,weight,mean,sd for the whole mixture catalogue.
void write_zoo_csv(std::ostream& out);

}  // namespace semidens

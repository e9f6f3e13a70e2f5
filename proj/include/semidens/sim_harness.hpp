#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semidens/density_zoo.hpp"
#include "semidens/estimator.hpp"

namespace semidens {

// What to simulate. Kind::Traditional is the plain KDE; Kind::FixedAlpha is
// the local fit at a fixed index; the selector kinds resolve alpha from each
// replication sample (falling back to alpha = 2 on degeneracy, which the
// harness counts but does not treat as a failure).
struct EstimatorSpec {
    enum class Kind { Traditional, FixedAlpha, Auto1, Auto2, Auto3 };
    Kind kind = Kind::Traditional;
    double alpha = 0.0;

    static EstimatorSpec traditional() { return {Kind::Traditional, 0.0}; }
    static EstimatorSpec fixed(double a) { return {Kind::FixedAlpha, a}; }
    static EstimatorSpec selector(int method);  // 1, 2 or 3

    std::string label() const;
};

// Resolves the index for one replication sample. Returns NaN for the
// traditional kernel estimator. Sets fell_back when a selector degenerated
// onto the alpha = 2 default.
double resolve_alpha(const EstimatorSpec& spec, std::span<const double> sample,
                     bool* fell_back = nullptr);

// Curve of the estimator over the grid at bandwidth h, with alpha already
// resolved for this sample.
std::vector<double> estimator_curve(const EstimatorSpec& spec,
                                    std::span<const double> sample, double alpha,
                                    double h, std::span<const double> grid);

// Equispaced odd-count grid covering the density's support widened by 4h,
// fine enough to resolve its narrowest component.
std::vector<double> ise_grid(const TrueDensity& truth, double h_max);

// Integrated squared error of a realized estimate against the truth by
// composite Simpson over the estimate's grid. Throws std::invalid_argument
// when the boundary integrand exceeds 1e-8 (grid too narrow).
double ise(std::span<const double> grid, std::span<const double> values,
           const TrueDensity& truth);
double ise(const DensityEstimate& estimate, const TrueDensity& truth);

struct MiseEstimate {
    double mean;
    double se;
    std::size_t failures;
};

// Monte Carlo MISE(h): average ISE over reps independent samples of size n,
// replication r drawing from the (seed, r) stream. Per-replication
// estimator failures are excluded and counted; more than 1% of them is a
// harness_error.
MiseEstimate mise(const TrueDensity& truth, const EstimatorSpec& spec, std::size_t n,
                  double h, std::size_t reps, std::uint64_t seed);

struct SimResult {
    std::string density_id;
    std::string estimator_label;
    std::vector<double> h_grid;
    std::vector<double> mise;
    std::vector<double> se;
    double min_mise = 0.0;
    double se_at_min = 0.0;
    double h_at_min = 0.0;
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::size_t failures = 0;
    std::size_t fallbacks = 0;          // selector degeneracies, not failures
    bool boundary_warning = false;      // minimizer sits on the range edge
    std::vector<double> ise_at_min;     // per replication, NaN where failed
};

// Coarse log-spaced search (15 points over h_range) plus one 9-point
// refinement pass around the minimizer; ties break toward smaller h. All
// bandwidths and estimators see the same replication samples, so paired
// comparisons are valid.
SimResult grid_search(const TrueDensity& truth, const EstimatorSpec& spec,
                      std::size_t n, std::size_t reps, std::uint64_t seed,
                      std::pair<double, double> h_range,
                      std::size_t coarse_points = 15, std::size_t refine_points = 9);

// Median and the MAD-based standard error used for unstable estimators.
struct RobustSummary {
    double median;
    double robust_se;
};

RobustSummary robust_summary(std::span<const double> values);

// Mean and standard error of paired differences a[i] - b[i], skipping pairs
// with a NaN member. Requires equal lengths.
struct PairedDiff {
    double mean;
    double se;
    std::size_t pairs;
};

PairedDiff paired_diff(std::span<const double> a, std::span<const double> b);

}  // namespace semidens

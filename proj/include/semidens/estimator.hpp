#pragma once

#include <span>
#include <vector>

#include "semidens/gaussian_start.hpp"
#include "semidens/kernel.hpp"

namespace semidens {

// Full recipe for the local L2-fit estimator: index alpha, bandwidth h,
// smoothing kernel and parametric start.
struct EstimatorConfig {
    double alpha;
    double h;
    Kernel kernel;
    GaussianStart start;

    // The closed-form denominator needs sigma^2 - (alpha - 2) h^2 > 0.
    bool closed_form_valid() const {
        return kernel.family() == KernelFamily::Gaussian &&
               start.variance() - (alpha - 2.0) * h * h > 0.0;
    }
};

struct DensityEstimate {
    std::vector<double> grid;
    std::vector<double> values;
    EstimatorConfig config;
};

// Traditional kernel density estimate (1/n) sum K_h(X_i - x).
double kde(std::span<const double> data, double h, const Kernel& kernel, double x);

// Denominator integral int K_h(t - x) g(t)^(2 - alpha) dt. Uses the Gaussian
// closed form when valid, otherwise adaptive quadrature with divergence
// detection (throws divergent_denominator_error when the integral does not
// exist, i.e. sigma^2 - (alpha - 2) h^2 <= 0).
double denom_integral(double x, const EstimatorConfig& cfg);

// The local L2-fit density estimate
//   g(x) * [n^-1 sum K_h(X_i - x) g(X_i)^(1-alpha)] / denom_integral(x).
// Exponentials are assembled in log space so extreme alpha cannot
// under/overflow on tail observations.
double fhat_alpha(std::span<const double> data, double x, const EstimatorConfig& cfg);

// fhat_alpha evaluated over a grid.
DensityEstimate fhat_curve(std::span<const double> data, const EstimatorConfig& cfg,
                           std::vector<double> grid);

// Default evaluation grid: 401 equispaced points spanning
// [min(data) - 4h - 4sigma, max(data) + 4h + 4sigma].
std::vector<double> default_grid(std::span<const double> data, const EstimatorConfig& cfg,
                                 std::size_t points = 401);

// Numerical integral of the estimate over the real line.
double integral_of_estimate(std::span<const double> data, const EstimatorConfig& cfg);

}  // namespace semidens

#include "semidens/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "semidens/errors.hpp"
#include "semidens/quadrature.hpp"

namespace semidens {

namespace {

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double log_sum_exp(std::span<const double> terms) {
    double m = -std::numeric_limits<double>::infinity();
    for (double t : terms) m = std::max(m, t);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

// log of int K_h(t-x) g(t)^(-beta) dt for Gaussian kernel and start,
// defined for sigma^2 - beta h^2 > 0.
double log_closed_integral(double beta, double x, double h, const GaussianStart& g) {
    const double v = g.variance() - beta * h * h;
    const double d = x - g.mu();
    return beta * kLogSqrt2Pi + (beta + 1.0) * std::log(g.sigma()) - 0.5 * std::log(v) +
           beta * d * d / (2.0 * v);
}

}  // namespace

double kde(std::span<const double> data, double h, const Kernel& kernel, double x) {
    if (data.empty()) throw std::invalid_argument("kde: empty sample");
    if (!(h > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
    double s = 0.0;
    for (double xi : data) s += kernel.evaluate(0, (xi - x) / h);
    return s / (h * static_cast<double>(data.size()));
}

double denom_integral(double x, const EstimatorConfig& cfg) {
    if (!(cfg.h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
    if (cfg.closed_form_valid()) {
        return std::exp(log_closed_integral(cfg.alpha - 2.0, x, cfg.h, cfg.start));
    }

    const auto integrand = [&](double t) {
        const double z = (t - x) / cfg.h;
        const double log_term = -0.5 * z * z - std::log(cfg.h) - kLogSqrt2Pi +
                                (2.0 - cfg.alpha) * cfg.start.log_pdf(t);
        return log_term > 700.0 ? std::numeric_limits<double>::infinity()
                                : std::exp(log_term);
    };

    // Expand the truncation until the value stabilizes; a still-growing or
    // non-finite sequence means the integral does not exist.
    const double scale = cfg.h + cfg.start.sigma() + std::fabs(x - cfg.start.mu());
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (double mult : {6.0, 12.0, 24.0, 48.0}) {
        double val;
        try {
            const double pts[] = {x - mult * scale, x - cfg.h, x, x + cfg.h, x + mult * scale};
            val = integrate_segments(integrand, pts, {.rel_tol = 1e-11});
        } catch (const quadrature_error&) {
            throw divergent_denominator_error(
                "denominator integral diverges at alpha=" + std::to_string(cfg.alpha) +
                ", h=" + std::to_string(cfg.h) + "; reduce alpha or h");
        }
        if (!std::isfinite(val)) break;
        if (std::isfinite(prev) && std::fabs(val - prev) <= 1e-9 * std::fabs(val)) {
            return val;
        }
        prev = val;
    }
    throw divergent_denominator_error(
        "denominator integral did not stabilize at alpha=" + std::to_string(cfg.alpha) +
        ", h=" + std::to_string(cfg.h) + " (sigma^2 - (alpha-2)h^2 = " +
        std::to_string(cfg.start.variance() - (cfg.alpha - 2.0) * cfg.h * cfg.h) +
        "); reduce alpha or h");
}

double fhat_alpha(std::span<const double> data, double x, const EstimatorConfig& cfg) {
    if (data.empty()) throw std::invalid_argument("fhat_alpha: empty sample");
    if (!(cfg.h > 0.0)) throw std::invalid_argument("fhat_alpha: bandwidth must be positive");

    const double n = static_cast<double>(data.size());
    std::vector<double> log_terms(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double z = (data[i] - x) / cfg.h;
        log_terms[i] = -0.5 * z * z + (1.0 - cfg.alpha) * cfg.start.log_pdf(data[i]);
    }
    // log of sum K_h(X_i - x) g(X_i)^(1-alpha), bar the 1/(h sqrt(2pi)) factor
    const double lse = log_sum_exp(log_terms);

    if (cfg.closed_form_valid()) {
        const double log_den = log_closed_integral(cfg.alpha - 2.0, x, cfg.h, cfg.start);
        const double log_val = cfg.start.log_pdf(x) + lse - std::log(n * cfg.h) -
                               kLogSqrt2Pi - log_den;
        return std::exp(log_val);
    }
    const double den = denom_integral(x, cfg);
    return std::exp(cfg.start.log_pdf(x) + lse - std::log(n * cfg.h) - kLogSqrt2Pi -
                    std::log(den));
}

DensityEstimate fhat_curve(std::span<const double> data, const EstimatorConfig& cfg,
                           std::vector<double> grid) {
    DensityEstimate est{std::move(grid), {}, cfg};
    est.values.resize(est.grid.size());
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
        est.values[i] = fhat_alpha(data, est.grid[i], cfg);
    }
    return est;
}

std::vector<double> default_grid(std::span<const double> data, const EstimatorConfig& cfg,
                                 std::size_t points) {
    const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    const double pad = 4.0 * cfg.h + 4.0 * cfg.start.sigma();
    const double lo = *mn - pad;
    const double hi = *mx + pad;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

double integral_of_estimate(std::span<const double> data, const EstimatorConfig& cfg) {
    const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    const double pad = 8.0 * (cfg.h + cfg.start.sigma());
    const double pts[] = {*mn - pad, cfg.start.mu(), *mx + pad};
    return integrate_segments([&](double x) { return fhat_alpha(data, x, cfg); }, pts,
                              {.rel_tol = 1e-9});
}

}  // namespace semidens

#include "semidens/theory.hpp"

#include <cmath>

#include "semidens/errors.hpp"
#include "semidens/quadrature.hpp"

namespace semidens {

double b1(double x, const TrueDensity& f, const GaussianStart& g0) {
    return f.deriv2(x) - f.pdf(x) * g0.q2(x);
}

double b2(double x, const TrueDensity& f, const GaussianStart& g0) {
    const double q = g0.q1(x);
    return 2.0 * (q * f.deriv1(x) - f.pdf(x) * q * q);
}

BiasCoefficients bias_coefficients(const TrueDensity& f, const GaussianStart& g0) {
    const auto pts = f.quadrature_breakpoints();
    const QuadOptions opt{.rel_tol = 1e-9, .abs_tol = 1e-15};
    const double c1 = integrate_segments(
        [&](double x) {
            const double v = b2(x, f, g0);
            return v * v;
        },
        pts, opt);
    const double c2 = integrate_segments(
        [&](double x) {
            return b2(x, f, g0) * (b1(x, f, g0) + b2(x, f, g0));
        },
        pts, opt);
    const double c3 = integrate_segments(
        [&](double x) {
            const double v = b1(x, f, g0) + b2(x, f, g0);
            return v * v;
        },
        pts, opt);
    return {c1, c2, c3};
}

double alpha_opt(const BiasCoefficients& c) {
    if (!(c.c1 > 1e-12 * (std::fabs(c.c3) + 1.0))) {
        throw selector_degenerate_error(
            "c1 is zero: the density sits in the parametric model, the optimal index "
            "is undefined");
    }
    return c.c2 / c.c1;
}

double r_min(const BiasCoefficients& c) {
    if (!(c.c1 > 1e-12 * (std::fabs(c.c3) + 1.0))) {
        throw selector_degenerate_error("c1 is zero: minimum squared bias is degenerate");
    }
    return c.c3 - c.c2 * c.c2 / c.c1;
}

double r_tilde(const TrueDensity& f) {
    return integrate_segments(
        [&](double x) {
            const double v = f.deriv2(x);
            return v * v;
        },
        f.quadrature_breakpoints(), {.rel_tol = 1e-9, .abs_tol = 1e-15});
}

double amise(double r_value, double h, std::size_t n, const Kernel& kernel) {
    if (!(h > 0.0) || n == 0) throw std::invalid_argument("amise: need h > 0 and n >= 1");
    const double mu2 = kernel.mu2();
    return 0.25 * h * h * h * h * mu2 * mu2 * r_value +
           kernel.roughness() / (static_cast<double>(n) * h);
}

double h_opt(double r_value, std::size_t n, const Kernel& kernel) {
    if (!(r_value > 0.0)) {
        throw selector_degenerate_error(
            "squared-bias integral is zero: optimal bandwidth undefined");
    }
    if (n == 0) throw std::invalid_argument("h_opt: need n >= 1");
    const double mu2 = kernel.mu2();
    return std::pow(kernel.roughness() / (mu2 * mu2), 0.2) * std::pow(r_value, -0.2) *
           std::pow(static_cast<double>(n), -0.2);
}

RatioRow ratio_row(const TrueDensity& f, const std::string& id) {
    const auto [mu0, var0] = f.kl_gaussian();
    const auto g0 = GaussianStart::from_params(mu0, std::sqrt(var0));
    const auto c = bias_coefficients(f, g0);
    const double rt = r_tilde(f);

    RatioRow row{id, c.r_of_alpha(0.0) / rt, c.r_of_alpha(1.0) / rt,
                 c.r_of_alpha(2.0) / rt, 0.0, std::nullopt};
    try {
        const double ao = alpha_opt(c);
        row.alpha_o = ao;
        row.ratio_alpha_opt = c.r_of_alpha(ao) / rt;
    } catch (const selector_degenerate_error&) {
        // model density: ratios are identically zero, no optimal index
    }
    return row;
}

std::vector<RatioRow> full_ratio_table() {
    std::vector<RatioRow> rows;
    for (int id = 1; id <= 15; ++id) {
        rows.push_back(ratio_row(marron_wand(id), "#" + std::to_string(id)));
    }
    for (int lam = 0; lam <= 5; ++lam) {
        rows.push_back(ratio_row(SkewNormal(lam), "lambda=" + std::to_string(lam)));
    }
    return rows;
}

}  // namespace semidens

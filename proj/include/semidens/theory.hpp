#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semidens/density_zoo.hpp"
#include "semidens/gaussian_start.hpp"
#include "semidens/kernel.hpp"

namespace semidens {

// Coefficients of the integrated squared leading bias,
// R(fhat_alpha) = c1 alpha^2 - 2 c2 alpha + c3.
struct BiasCoefficients {
    double c1;
    double c2;
    double c3;

    double r_of_alpha(double alpha) const {
        return c1 * alpha * alpha - 2.0 * c2 * alpha + c3;
    }
};

// Leading bias components of the adjusted estimator against start g0:
//   b1 = f'' - f g0''/g0
//   b2 = 2 { g0' f' / g0 - f (g0'/g0)^2 }
double b1(double x, const TrueDensity& f, const GaussianStart& g0);
double b2(double x, const TrueDensity& f, const GaussianStart& g0);

// Quadrature of (int b2^2, int b2(b1+b2), int (b1+b2)^2).
BiasCoefficients bias_coefficients(const TrueDensity& f, const GaussianStart& g0);

// Index minimizing the squared-bias quadratic, alpha_o = c2/c1, and the
// minimum c3 - c2^2/c1. Throws selector_degenerate_error when c1 is zero
// (f inside the parametric model: every alpha is equally perfect).
double alpha_opt(const BiasCoefficients& c);
double r_min(const BiasCoefficients& c);

// R(ftilde) = int f''(x)^2 dx, the traditional KDE's squared-bias integral.
double r_tilde(const TrueDensity& f);

// AMISE(h) = h^4/4 mu_{2,K}^2 r_value + R(K)/(n h) and its minimizer
// h = {R(K)/mu_{2,K}^2}^{1/5} r_value^{-1/5} n^{-1/5}.
double amise(double r_value, double h, std::size_t n, const Kernel& kernel);
double h_opt(double r_value, std::size_t n, const Kernel& kernel);

struct RatioRow {
    std::string density_id;
    double ratio_alpha0;
    double ratio_alpha1;
    double ratio_alpha2;
    double ratio_alpha_opt;               // 0 when alpha_o undefined
    std::optional<double> alpha_o;        // empty when c1 = 0
};

// Ratio R(fhat_alpha)/R(ftilde) at alpha in {0, 1, 2, alpha_o} for each
// density against its least-false Gaussian start.
RatioRow ratio_row(const TrueDensity& f, const std::string& id);

// The 15 Marron-Wand mixtures followed by skew-normals lambda = 0..5.
std::vector<RatioRow> full_ratio_table();

}  // namespace semidens

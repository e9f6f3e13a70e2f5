#include "semidens/kernel.hpp"

#include <string>

#include "semidens/errors.hpp"
#include "semidens/quadrature.hpp"

namespace semidens {

namespace {

// Half-width of the truncated integration range. The integrands are
// polynomials times exp(-z^2) (two factors) or exp(-z^2/2) (one factor);
// at |z| = 16 the tail contribution is below 1e-40 even against z^20 growth.
constexpr double kRange = 16.0;

}  // namespace

Kernel::Kernel(KernelFamily family, int max_derivative_order)
    : family_(family), max_order_(max_derivative_order) {
    if (max_derivative_order < 0) {
        throw unsupported_order_error("max_derivative_order must be >= 0");
    }
}

void Kernel::check_order(int p) const {
    if (p < 0 || p > max_order_) {
        throw unsupported_order_error("kernel derivative order " + std::to_string(p) +
                                      " outside [0, " + std::to_string(max_order_) + "]");
    }
}

double Kernel::evaluate(int p, double z) const {
    check_order(p);
    return gauss_pdf_deriv(p, z);
}

double Kernel::moment(int ell, int p1, int p2) const {
    check_order(p1);
    check_order(p2);
    const double pts[] = {-kRange, -4.0, 0.0, 4.0, kRange};
    return integrate_segments(
        [&](double z) {
            return std::pow(z, ell) * gauss_pdf_deriv(p1, z) * gauss_pdf_deriv(p2, z);
        },
        pts);
}

double Kernel::moment(int ell, int p) const {
    check_order(p);
    const double pts[] = {-kRange, -4.0, 0.0, 4.0, kRange};
    return integrate_segments(
        [&](double z) { return std::pow(z, ell) * gauss_pdf_deriv(p, z); }, pts);
}

}  // namespace semidens

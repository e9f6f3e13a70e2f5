#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "semidens/errors.hpp"

namespace semidens {

// Gauss(7)/Kronrod(15) rule on [a, b]. Returns the K15 estimate and writes
// the usual scaled |G7 - K15| error proxy.
template <class Func>
double quad_g7k15(const Func& f, double a, double b, double& err) {
    // abscissa, G7 weight, K15 weight
    static constexpr double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529},
    };

    const double mid = 0.5 * (a + b);
    const double half = b - mid;

    double y0 = f(mid);
    double g7 = nw[0][1] * y0;
    double k15 = nw[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * nw[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += nw[i][1] * yi;
        k15 += nw[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;

    err = 200.0 * std::fabs(g7 - k15);
    err *= std::sqrt(err);
    return k15;
}

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_intervals = 20000;
};

// Adaptive bisection driven by the G7K15 error estimate. Throws
// quadrature_error when the interval budget runs out, which is also how
// divergent integrands surface.
template <class Func>
double integrate(const Func& f, double a, double b, const QuadOptions& opt = {}) {
    std::vector<std::pair<double, double>> stack;
    stack.reserve(64);
    stack.emplace_back(a, b);

    double sum = 0.0;
    std::size_t used = 0;
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();

        double err = 0.0;
        const double s = quad_g7k15(f, lo, hi, err);
        if (err < opt.rel_tol * std::fabs(s) || err < opt.abs_tol) {
            sum += s;
            continue;
        }
        if (++used > opt.max_intervals) {
            throw quadrature_error("adaptive quadrature did not converge on [" +
                                   std::to_string(lo) + ", " + std::to_string(hi) +
                                   "]; integrand may be divergent");
        }
        const double mid = 0.5 * (lo + hi);
        stack.emplace_back(lo, mid);
        stack.emplace_back(mid, hi);
    }
    return sum;
}

// Integrates across a sorted breakpoint list. Narrow density spikes get
// their own starting interval so the adaptive rule cannot step over them.
template <class Func>
double integrate_segments(const Func& f, std::span<const double> breakpoints,
                          const QuadOptions& opt = {}) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) {
            total += integrate(f, breakpoints[i], breakpoints[i + 1], opt);
        }
    }
    return total;
}

}  // namespace semidens

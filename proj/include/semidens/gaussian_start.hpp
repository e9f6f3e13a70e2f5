#pragma once

#include <cstddef>
#include <span>

namespace semidens {

// Parametric pilot density g(x, theta_hat) = phi_sigma(x - mu) together with
// the log-derivative ratios q1 = g'/g and q2 = g''/g that the index
// selectors and the bias theory consume. Immutable after construction.
class GaussianStart {
public:
    // MLE fit: mean and variance with divisor n (not n-1). Throws
    // degenerate_sample_error for n < 2 or zero sample variance.
    static GaussianStart fit_mle(std::span<const double> data);

    // Start with externally supplied parameters, e.g. the least-false
    // (mu0, sigma0^2) of a known true density.
    static GaussianStart from_params(double mu, double sigma, std::size_t n = 0);

    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    double variance() const { return sigma_ * sigma_; }
    std::size_t sample_size() const { return n_; }

    double pdf(double x) const;
    double log_pdf(double x) const;
    double deriv1(double x) const;  // d/dx g(x)
    double deriv2(double x) const;  // d^2/dx^2 g(x)

    // q1(x) = g'(x)/g(x) = -(x - mu)/sigma^2
    double q1(double x) const;
    // q2(x) = g''(x)/g(x) = ((x - mu)^2 - sigma^2)/sigma^4
    double q2(double x) const;

private:
    GaussianStart(double mu, double sigma, std::size_t n);

    double mu_;
    double sigma_;
    std::size_t n_;
};

}  // namespace semidens

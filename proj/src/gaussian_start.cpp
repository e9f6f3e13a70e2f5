#include "semidens/gaussian_start.hpp"

#include <cmath>

#include "semidens/errors.hpp"
#include "semidens/kernel.hpp"

namespace semidens {

GaussianStart::GaussianStart(double mu, double sigma, std::size_t n)
    : mu_(mu), sigma_(sigma), n_(n) {}

GaussianStart GaussianStart::fit_mle(std::span<const double> data) {
    const std::size_t n = data.size();
    if (n < 2) {
        throw degenerate_sample_error("MLE fit needs at least 2 observations, got " +
                                      std::to_string(n));
    }
    double mean = 0.0;
    for (double x : data) mean += x;
    mean /= static_cast<double>(n);

    double ss = 0.0;
    for (double x : data) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(n);
    if (!(var > 0.0)) {
        throw degenerate_sample_error("sample variance is zero; Gaussian fit is degenerate");
    }
    return GaussianStart(mean, std::sqrt(var), n);
}

GaussianStart GaussianStart::from_params(double mu, double sigma, std::size_t n) {
    if (!(sigma > 0.0)) {
        throw degenerate_sample_error("sigma must be positive");
    }
    return GaussianStart(mu, sigma, n);
}

double GaussianStart::pdf(double x) const {
    const double z = (x - mu_) / sigma_;
    return kInvSqrt2Pi / sigma_ * std::exp(-0.5 * z * z);
}

double GaussianStart::log_pdf(double x) const {
    const double z = (x - mu_) / sigma_;
    return -0.5 * z * z - std::log(sigma_) + std::log(kInvSqrt2Pi);
}

double GaussianStart::deriv1(double x) const { return q1(x) * pdf(x); }

double GaussianStart::deriv2(double x) const { return q2(x) * pdf(x); }

double GaussianStart::q1(double x) const { return -(x - mu_) / (sigma_ * sigma_); }

double GaussianStart::q2(double x) const {
    const double v = sigma_ * sigma_;
    const double d = x - mu_;
    return (d * d - v) / (v * v);
}

}  // namespace semidens

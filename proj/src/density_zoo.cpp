#include "semidens/density_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "semidens/kernel.hpp"
#include "semidens/rng.hpp"

namespace semidens {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

// ---------------------------------------------------------------------------
// NormalMixture

NormalMixture::NormalMixture(std::vector<double> weights, std::vector<double> means,
                             std::vector<double> sds, std::string label)
    : weights_(std::move(weights)),
      means_(std::move(means)),
      sds_(std::move(sds)),
      label_(std::move(label)) {
    if (weights_.empty() || weights_.size() != means_.size() ||
        weights_.size() != sds_.size()) {
        throw std::invalid_argument("mixture component lists must be nonempty and equal-length");
    }
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::fabs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("mixture weights must sum to 1");
    }
    for (double s : sds_) {
        if (!(s > 0.0)) throw std::invalid_argument("mixture sds must be positive");
    }
    cum_weights_.resize(weights_.size());
    std::partial_sum(weights_.begin(), weights_.end(), cum_weights_.begin());
    cum_weights_.back() = 1.0;
}

double NormalMixture::pdf(double x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double z = (x - means_[i]) / sds_[i];
        v += weights_[i] * gauss_pdf(z) / sds_[i];
    }
    return v;
}

double NormalMixture::deriv1(double x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double z = (x - means_[i]) / sds_[i];
        v -= weights_[i] * gauss_pdf(z) * z / (sds_[i] * sds_[i]);
    }
    return v;
}

double NormalMixture::deriv2(double x) const {
    // f_i'' = f_i He_2(z_i) / sigma_i^2
    double v = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double z = (x - means_[i]) / sds_[i];
        v += weights_[i] * gauss_pdf(z) * hermite_he(2, z) / (sds_[i] * sds_[i] * sds_[i]);
    }
    return v;
}

KlGaussian NormalMixture::kl_gaussian() const {
    double mu0 = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) mu0 += weights_[i] * means_[i];
    double var = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double d = means_[i] - mu0;
        var += weights_[i] * (sds_[i] * sds_[i] + d * d);
    }
    return {mu0, var};
}

std::vector<double> NormalMixture::sample(std::size_t n, std::uint64_t seed,
                                          std::uint64_t stream) const {
    Rng rng(seed, stream);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform();
        std::size_t i = 0;
        while (i + 1 < cum_weights_.size() && u >= cum_weights_[i]) ++i;
        out[k] = means_[i] + sds_[i] * rng.normal();
    }
    return out;
}

std::vector<double> NormalMixture::quadrature_breakpoints() const {
    const auto [mu0, var0] = kl_gaussian();
    const double s0 = std::sqrt(var0);
    std::vector<double> pts{mu0 - 12.0 * s0, mu0 + 12.0 * s0};
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        for (double k : {-8.0, -2.0, 0.0, 2.0, 8.0}) {
            pts.push_back(means_[i] + k * sds_[i]);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double NormalMixture::min_scale() const {
    return *std::min_element(sds_.begin(), sds_.end());
}

std::pair<double, double> NormalMixture::support_hint() const {
    double lo = means_[0] - 6.0 * sds_[0];
    double hi = means_[0] + 6.0 * sds_[0];
    for (std::size_t i = 1; i < weights_.size(); ++i) {
        lo = std::min(lo, means_[i] - 6.0 * sds_[i]);
        hi = std::max(hi, means_[i] + 6.0 * sds_[i]);
    }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// SkewNormal

SkewNormal::SkewNormal(double lambda) : lambda_(lambda) {}

double SkewNormal::s1(double x) const {
    return lambda_ * gauss_pdf(lambda_ * x) - x * normal_cdf(lambda_ * x);
}

double SkewNormal::s2(double x) const {
    return hermite_he(2, x) * normal_cdf(lambda_ * x) -
           (lambda_ * lambda_ * lambda_ + 2.0 * lambda_) * x * gauss_pdf(lambda_ * x);
}

double SkewNormal::pdf(double x) const { return 2.0 * gauss_pdf(x) * normal_cdf(lambda_ * x); }

double SkewNormal::deriv1(double x) const { return 2.0 * gauss_pdf(x) * s1(x); }

double SkewNormal::deriv2(double x) const { return 2.0 * gauss_pdf(x) * s2(x); }

KlGaussian SkewNormal::kl_gaussian() const {
    const double delta_sq = lambda_ * lambda_ / (1.0 + lambda_ * lambda_);
    const double mu0 = std::sqrt(2.0 / std::numbers::pi) *
                       (lambda_ >= 0 ? 1.0 : -1.0) * std::sqrt(delta_sq);
    return {mu0, 1.0 - 2.0 * delta_sq / std::numbers::pi};
}

std::vector<double> SkewNormal::sample(std::size_t n, std::uint64_t seed,
                                       std::uint64_t stream) const {
    const double delta = lambda_ / std::sqrt(1.0 + lambda_ * lambda_);
    const double rest = std::sqrt(1.0 - delta * delta);
    Rng rng(seed, stream);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        out[k] = delta * std::fabs(z1) + rest * z2;
    }
    return out;
}

std::vector<double> SkewNormal::quadrature_breakpoints() const {
    const auto [mu0, var0] = kl_gaussian();
    const double s0 = std::sqrt(var0);
    std::vector<double> pts{mu0 - 12.0 * s0, -4.0, 0.0, 4.0, mu0 + 12.0 * s0};
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double SkewNormal::min_scale() const {
    return 1.0 / std::max(1.0, std::fabs(lambda_));
}

std::pair<double, double> SkewNormal::support_hint() const {
    const double mu0 = kl_gaussian().mu0;
    return {-8.0 + std::min(0.0, mu0), 8.0 + std::max(0.0, mu0)};
}

std::string SkewNormal::label() const { return "skew-normal(" + std::to_string(lambda_) + ")"; }

// ---------------------------------------------------------------------------
// Marron-Wand catalogue

namespace {

NormalMixture make_mw(int id) {
    using V = std::vector<double>;
    switch (id) {
        case 1:
            return {V{1.0}, V{0.0}, V{1.0}, "MW1 Gaussian"};
        case 2:
            return {V{0.2, 0.2, 0.6}, V{0.0, 0.5, 13.0 / 12.0}, V{1.0, 2.0 / 3.0, 5.0 / 9.0},
                    "MW2 Skewed unimodal"};
        case 3: {
            V w(8, 0.125), m(8), s(8);
            for (int l = 0; l < 8; ++l) {
                const double r = std::pow(2.0 / 3.0, l);
                m[l] = 3.0 * (r - 1.0);
                s[l] = r;
            }
            return {w, m, s, "MW3 Strongly skewed"};
        }
        case 4:
            return {V{2.0 / 3.0, 1.0 / 3.0}, V{0.0, 0.0}, V{1.0, 0.1}, "MW4 Kurtotic unimodal"};
        case 5:
            return {V{0.1, 0.9}, V{0.0, 0.0}, V{1.0, 0.1}, "MW5 Outlier"};
        case 6:
            return {V{0.5, 0.5}, V{-1.0, 1.0}, V{2.0 / 3.0, 2.0 / 3.0}, "MW6 Bimodal"};
        case 7:
            return {V{0.5, 0.5}, V{-1.5, 1.5}, V{0.5, 0.5}, "MW7 Separated bimodal"};
        case 8:
            return {V{0.75, 0.25}, V{0.0, 1.5}, V{1.0, 1.0 / 3.0}, "MW8 Skewed bimodal"};
        case 9:
            return {V{0.45, 0.45, 0.1}, V{-1.2, 1.2, 0.0}, V{0.6, 0.6, 0.25}, "MW9 Trimodal"};
        case 10: {
            V w{0.5}, m{0.0}, s{1.0};
            for (int l = 0; l < 5; ++l) {
                w.push_back(0.1);
                m.push_back(0.5 * l - 1.0);
                s.push_back(0.1);
            }
            return {w, m, s, "MW10 Claw"};
        }
        case 11: {
            V w{0.49, 0.49}, m{-1.0, 1.0}, s{2.0 / 3.0, 2.0 / 3.0};
            for (int l = 0; l < 7; ++l) {
                w.push_back(1.0 / 350.0);
                m.push_back((l - 3.0) / 2.0);
                s.push_back(0.01);
            }
            return {w, m, s, "MW11 Double claw"};
        }
        case 12: {
            V w{0.5}, m{0.0}, s{1.0};
            for (int l = -2; l <= 2; ++l) {
                w.push_back(std::pow(2.0, 1 - l) / 31.0);
                m.push_back(l + 0.5);
                s.push_back(std::pow(2.0, -l) / 10.0);
            }
            return {w, m, s, "MW12 Asymmetric claw"};
        }
        case 13: {
            V w, m, s;
            for (int l = 0; l < 2; ++l) {
                w.push_back(0.46);
                m.push_back(2.0 * l - 1.0);
                s.push_back(2.0 / 3.0);
            }
            for (int l = 1; l <= 3; ++l) {
                w.push_back(1.0 / 300.0);
                m.push_back(-l / 2.0);
                s.push_back(0.01);
            }
            for (int l = 1; l <= 3; ++l) {
                w.push_back(7.0 / 300.0);
                m.push_back(l / 2.0);
                s.push_back(0.07);
            }
            return {w, m, s, "MW13 Asymmetric double claw"};
        }
        case 14: {
            V w, m, s;
            for (int l = 0; l < 6; ++l) {
                w.push_back(std::pow(2.0, 5 - l) / 63.0);
                m.push_back((65.0 - 96.0 * std::pow(0.5, l)) / 21.0);
                s.push_back((32.0 / 63.0) * std::pow(2.0, -l));
            }
            return {w, m, s, "MW14 Smooth comb"};
        }
        case 15: {
            V w, m, s;
            for (int l = 0; l < 3; ++l) {
                w.push_back(2.0 / 7.0);
                m.push_back((12.0 * l - 15.0) / 7.0);
                s.push_back(2.0 / 7.0);
            }
            for (int l = 8; l <= 10; ++l) {
                w.push_back(1.0 / 21.0);
                m.push_back(2.0 * l / 7.0);
                s.push_back(1.0 / 21.0);
            }
            return {w, m, s, "MW15 Discrete comb"};
        }
        default:
            throw std::invalid_argument("Marron-Wand id must be in 1..15, got " +
                                        std::to_string(id));
    }
}

}  // namespace

NormalMixture marron_wand(int id) { return make_mw(id); }

const std::vector<std::string>& marron_wand_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (int id = 1; id <= 15; ++id) v.push_back(make_mw(id).label());
        return v;
    }();
    return names;
}

}  // namespace semidens

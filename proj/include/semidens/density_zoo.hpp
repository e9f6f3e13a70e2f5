#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace semidens {

struct KlGaussian {
    double mu0;
    double sigma0_sq;
};

// Ground-truth density with exact derivatives, moments and seeded sampling.
// Implementations are immutable; sampling derives an owned stream from
// (seed, stream) so workers never share RNG state.
class TrueDensity {
public:
    virtual ~TrueDensity() = default;

    virtual double pdf(double x) const = 0;
    virtual double deriv1(double x) const = 0;
    virtual double deriv2(double x) const = 0;

    // Least-false Gaussian parameters: the exact mean and variance.
    virtual KlGaussian kl_gaussian() const = 0;

    virtual std::vector<double> sample(std::size_t n, std::uint64_t seed,
                                       std::uint64_t stream = 0) const = 0;

    // Sorted initial subdivision for adaptive quadrature of densities with
    // narrow components; covers +-12 effective standard deviations.
    virtual std::vector<double> quadrature_breakpoints() const = 0;

    // Range holding all but <1e-6 of the mass, for ISE grids.
    virtual std::pair<double, double> support_hint() const = 0;

    // Smallest feature width; ISE grids must resolve it.
    virtual double min_scale() const = 0;

    virtual std::string label() const = 0;
};

class NormalMixture final : public TrueDensity {
public:
    // Throws std::invalid_argument unless the weights sum to 1 (1e-12) and
    // every sd is positive.
    NormalMixture(std::vector<double> weights, std::vector<double> means,
                  std::vector<double> sds, std::string label = "mixture");

    std::size_t components() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& means() const { return means_; }
    const std::vector<double>& sds() const { return sds_; }

    double pdf(double x) const override;
    double deriv1(double x) const override;
    double deriv2(double x) const override;
    KlGaussian kl_gaussian() const override;
    std::vector<double> sample(std::size_t n, std::uint64_t seed,
                               std::uint64_t stream = 0) const override;
    std::vector<double> quadrature_breakpoints() const override;
    std::pair<double, double> support_hint() const override;
    double min_scale() const override;
    std::string label() const override { return label_; }

private:
    std::vector<double> weights_;
    std::vector<double> means_;
    std::vector<double> sds_;
    std::vector<double> cum_weights_;
    std::string label_;
};

// Azzalini skew-normal SN(lambda) with density 2 phi(x) Phi(lambda x).
class SkewNormal final : public TrueDensity {
public:
    explicit SkewNormal(double lambda);

    double lambda() const { return lambda_; }

    // f' = 2 phi(x) s1(x), f'' = 2 phi(x) s2(x)
    double s1(double x) const;
    double s2(double x) const;

    double pdf(double x) const override;
    double deriv1(double x) const override;
    double deriv2(double x) const override;
    KlGaussian kl_gaussian() const override;
    std::vector<double> sample(std::size_t n, std::uint64_t seed,
                               std::uint64_t stream = 0) const override;
    std::vector<double> quadrature_breakpoints() const override;
    std::pair<double, double> support_hint() const override;
    double min_scale() const override;
    std::string label() const override;

private:
    double lambda_;
};

// Standard normal CDF, accurate to ~1 ulp.
double normal_cdf(double x);

// The 15 Marron-Wand test mixtures, id in 1..15. Throws
// std::invalid_argument for other ids.
NormalMixture marron_wand(int id);

const std::vector<std::string>& marron_wand_names();

}  // namespace semidens

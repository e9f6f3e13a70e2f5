#pragma once

#include <array>
#include <span>
#include <vector>

#include "semidens/gaussian_start.hpp"
#include "semidens/kernel.hpp"
#include "semidens/theory.hpp"

namespace semidens {

// Shared default Gaussian kernel, derivative orders up to 9 (the selector
// pipeline needs order 7).
const Kernel& gaussian_kernel();

// Sample Hermite moments gamma_k = n^-1 sum He_k((X_i - mu)/sigma) for
// k = 0..m. With the MLE fit, gamma_0 = 1 and gamma_1 = gamma_2 = 0 up to
// rounding.
struct HermiteMoments {
    std::vector<double> gamma_hat;
    int m;
    double mu_hat;
    double sigma_hat;
};

HermiteMoments hermite_moments(std::span<const double> data, int m);
HermiteMoments hermite_moments(std::span<const double> data, int m,
                               const GaussianStart& start);

// Bias coefficients of the order-5 Hermite expansion with Gaussian start,
// transcribed coefficient-for-coefficient from the source formulas
// (including the anomalous 32/57 factor in the middle one; see the
// cross-check in the test suite).
BiasCoefficients c_bar(double gamma3, double gamma4, double gamma5, double sigma);

// Kernel-derivative estimates of the bias components at x.
double b1_hat(double x, std::span<const double> data, double h,
              const GaussianStart& start, const Kernel& kernel = gaussian_kernel());
double b2_hat(double x, std::span<const double> data, double h,
              const GaussianStart& start, const Kernel& kernel = gaussian_kernel());

// Nonparametric (c1, c2, c3) at bandwidth h: quadrature of the squared
// b-hat combinations over the data range extended by 5h + 5sigma.
BiasCoefficients c_hats(std::span<const double> data, double h,
                        const GaussianStart& start,
                        const Kernel& kernel = gaussian_kernel());

// Direct index selector: Hermite-moment bias guess -> pilot bandwidth
// h_bar -> alpha = c2_hat(h_bar)/c1_hat(h_bar). Throws
// selector_degenerate_error when the moment-based coefficients are
// degenerate (callers should fall back to alpha = 2).
struct DirectSelection {
    double alpha;
    double h_bar;
    BiasCoefficients moment_coeffs;   // the c_bar values behind h_bar
    BiasCoefficients kernel_coeffs;   // c_hats at h_bar
};

DirectSelection alpha_hat_1(std::span<const double> data,
                            const Kernel& kernel = gaussian_kernel());

// Density-functional U-statistic
//   psi_hat_g(p|r,s) = 1/(n(n-1)) sum_{i != j} q1(X_i)^r q2(X_i)^s
//                      L_g^(p)(X_i - X_j),
// with L_g^(p)(z) = g^-(p+1) L^(p)(z/g). Row sums accumulate in index
// order, so the value is exchangeable and reproducible bit-for-bit.
struct FunctionalEstimate {
    double value;
    int p, r, s;
    double g;
};

FunctionalEstimate psi_hat(std::span<const double> data, int p, int r, int s, double g,
                           const GaussianStart& start,
                           const Kernel& kernel = gaussian_kernel());

// One pass over all pairs for several (p, r, s) triples sharing a
// bandwidth. Each entry equals the corresponding single psi_hat call
// exactly.
struct PsiTriple {
    int p, r, s;
};

std::vector<double> psi_hat_batch(std::span<const double> data,
                                  std::span<const PsiTriple> triples, double g,
                                  const GaussianStart& start,
                                  const Kernel& kernel = gaussian_kernel());

// Hermite-expansion plug-in estimate of psi(p|r,s) with truncation order m.
double psi_tilde(std::span<const double> data, int p, int r, int s, int m,
                 const GaussianStart& start);

// Kernel moment combinations used by the stage-bandwidth formulas.
struct LBrackets {
    double l1, l2, l3;
};

LBrackets l_brackets(int p1, int p2, const Kernel& kernel = gaussian_kernel());

// Variance-constant estimates feeding the stage bandwidths; both evaluated
// at the same beta here, the pipeline uses separate betas per chain.
std::pair<double, double> lambda_kappa_sq(std::span<const double> data, double beta,
                                          int p1, int p2, const GaussianStart& start,
                                          const Kernel& kernel = gaussian_kernel());

double lambda_sq(std::span<const double> data, double beta, int p1, int p2,
                 const GaussianStart& start, const Kernel& kernel = gaussian_kernel());
double kappa_sq(std::span<const double> data, double beta, int p2,
                const GaussianStart& start, const Kernel& kernel = gaussian_kernel());

// AMSE-optimal bandwidth for a psi-hat combination a*psi(0|0,2) +
// b*psi(0|2,1) + c*psi(0|4,0), with the unknown functionals replaced by
// order-5 Hermite pilot estimates. Falls back to the normal-reference
// sigma * n^(-2/5) when the pilot functionals degenerate.
double beta_amse(double a, double b, double c, std::span<const double> data,
                 const GaussianStart& start, const Kernel& kernel = gaussian_kernel(),
                 int pilot_m = 5);

// Everything the six-stage selector produces, kept for diagnostics.
struct PipelineTrace {
    double n_tilde6, d_tilde6;
    double beta_n1, beta_d1, beta_n2, beta_d2, beta_n3, beta_d3, beta_0;
    double lambda_sq_67, kappa_sq_6;
    double lambda_sq_45, kappa_sq_4;
    double lambda_sq_23, kappa_sq_2;
    double g_n1, g_d1, g_n2, g_d2, g_n3, g_d3;
    double n_hat4, d_hat4, n_hat2, d_hat2, n_hat0, d_hat0;
    double g_amsre_star;
    double n_star, d_star;
    double alpha_hat_2, alpha_hat_3;
};

// Functional-estimation selector: runs the six stages and returns the full
// trace including alpha_hat_2 (single AMSRE bandwidth) and alpha_hat_3
// (separate numerator/denominator bandwidths). Throws stage_failure_error
// when a stage produces an unusable bandwidth and selector_degenerate_error
// when a denominator functional vanishes.
PipelineTrace pipeline(std::span<const double> data, const GaussianStart& start,
                       const Kernel& kernel = gaussian_kernel());

// Bias-adjusted plug-in bandwidth built on the direct selector's h_bar.
struct FinalBandwidth {
    double h;
    double alpha1;
    double h_bar;
    double r_hat;
    double r_dagger;  // after the positivity floor, when applied
    bool floored;
};

FinalBandwidth h_final(std::span<const double> data,
                       const Kernel& kernel = gaussian_kernel());

}  // namespace semidens

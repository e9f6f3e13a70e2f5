#include "semidens/index_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "semidens/errors.hpp"
#include "semidens/quadrature.hpp"

namespace semidens {

namespace {

// Integer power by ascending multiplication; keeps the arithmetic identical
// to the brute-force oracles in the test suite.
double ipow(double base, int e) {
    double v = 1.0;
    for (int k = 0; k < e; ++k) v *= base;
    return v;
}

double factorial(int k) {
    double v = 1.0;
    for (int j = 2; j <= k; ++j) v *= j;
    return v;
}

}  // namespace

const Kernel& gaussian_kernel() {
    static const Kernel k(KernelFamily::Gaussian, 9);
    return k;
}

HermiteMoments hermite_moments(std::span<const double> data, int m) {
    return hermite_moments(data, m, GaussianStart::fit_mle(data));
}

HermiteMoments hermite_moments(std::span<const double> data, int m,
                               const GaussianStart& start) {
    if (m < 3) throw std::invalid_argument("hermite_moments: need m >= 3");
    const double n = static_cast<double>(data.size());
    std::vector<double> gam(m + 1, 0.0);
    for (double x : data) {
        const double z = (x - start.mu()) / start.sigma();
        double prev = 1.0, cur = z;
        gam[0] += 1.0;
        if (m >= 1) gam[1] += z;
        for (int k = 2; k <= m; ++k) {
            const double next = z * cur - (k - 1) * prev;
            prev = cur;
            cur = next;
            gam[k] += cur;
        }
    }
    for (double& g : gam) g /= n;
    gam[0] = 1.0;
    return {std::move(gam), m, start.mu(), start.sigma()};
}

BiasCoefficients c_bar(double g3, double g4, double g5, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("c_bar: sigma must be positive");
    const double scale = 1.0 / (ipow(sigma, 5) * std::sqrt(std::numbers::pi));
    const double g3s = g3 * g3, g4s = g4 * g4, g5s = g5 * g5;
    const double c1 = scale * (g3s * (7.0 / 16.0) + g4s / 9.0 * (33.0 / 32.0) +
                               g5s / 144.0 * (225.0 / 64.0) - g3 * g5 / 6.0 * (21.0 / 32.0));
    // 32/57 transcribed as printed; see the truncated-expansion cross-check
    // test for the documented discrepancy in this one coefficient.
    const double c2 = scale * (g3s * (3.0 / 4.0) + g4s / 9.0 * (32.0 / 57.0) +
                               g5s / 144.0 * (195.0 / 32.0) - g3 * g5 / 6.0 * (39.0 / 32.0));
    const double c3 = scale * (g3s * (3.0 / 2.0) + g4s / 9.0 * (123.0 / 32.0) +
                               g5s / 144.0 * (225.0 / 16.0) - g3 * g5 / 2.0);
    return {c1, c2, c3};
}

double b1_hat(double x, std::span<const double> data, double h,
              const GaussianStart& start, const Kernel& kernel) {
    const double q2x = start.q2(x);
    double s = 0.0;
    for (double xi : data) {
        const double u = (x - xi) / h;
        s += kernel.evaluate(2, u) / (h * h * h) - kernel.evaluate(0, u) / h * q2x;
    }
    return s / static_cast<double>(data.size());
}

double b2_hat(double x, std::span<const double> data, double h,
              const GaussianStart& start, const Kernel& kernel) {
    const double q1x = start.q1(x);
    double s = 0.0;
    for (double xi : data) {
        const double u = (x - xi) / h;
        s += kernel.evaluate(1, u) / (h * h) * q1x - kernel.evaluate(0, u) / h * q1x * q1x;
    }
    return 2.0 * s / static_cast<double>(data.size());
}

BiasCoefficients c_hats(std::span<const double> data, double h,
                        const GaussianStart& start, const Kernel& kernel) {
    if (!(h > 0.0)) throw std::invalid_argument("c_hats: bandwidth must be positive");
    const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    const double pad = 5.0 * h + 5.0 * start.sigma();
    const double pts[] = {*mn - pad, start.mu(), *mx + pad};
    const QuadOptions opt{.rel_tol = 1e-8, .abs_tol = 1e-13};

    const double c1 = integrate_segments(
        [&](double x) {
            const double v = b2_hat(x, data, h, start, kernel);
            return v * v;
        },
        pts, opt);
    const double c2 = integrate_segments(
        [&](double x) {
            const double v2 = b2_hat(x, data, h, start, kernel);
            return v2 * (b1_hat(x, data, h, start, kernel) + v2);
        },
        pts, opt);
    const double c3 = integrate_segments(
        [&](double x) {
            const double v = b1_hat(x, data, h, start, kernel) +
                             b2_hat(x, data, h, start, kernel);
            return v * v;
        },
        pts, opt);
    return {c1, c2, c3};
}

DirectSelection alpha_hat_1(std::span<const double> data, const Kernel& kernel) {
    const auto start = GaussianStart::fit_mle(data);
    const auto hm = hermite_moments(data, 5, start);
    const auto cb = c_bar(hm.gamma_hat[3], hm.gamma_hat[4], hm.gamma_hat[5], start.sigma());
    if (!(cb.c1 > 0.0)) {
        throw selector_degenerate_error(
            "direct selector: moment-based c1 is zero (sample looks exactly "
            "Gaussian); recommend alpha = 2");
    }
    const double r_bar = cb.c3 - cb.c2 * cb.c2 / cb.c1;
    if (!(r_bar > 0.0)) {
        throw selector_degenerate_error(
            "direct selector: moment-based minimum squared bias is zero; "
            "recommend alpha = 2");
    }
    const double mu2 = kernel.mu2();
    const double n = static_cast<double>(data.size());
    const double h_bar = std::pow(kernel.roughness() / (mu2 * mu2), 0.2) *
                         std::pow(r_bar, -0.2) * std::pow(n, -0.2);
    const auto ch = c_hats(data, h_bar, start, kernel);
    if (!(ch.c1 > 0.0)) {
        throw selector_degenerate_error(
            "direct selector: kernel-based c1 is zero; recommend alpha = 2");
    }
    return {ch.c2 / ch.c1, h_bar, cb, ch};
}

// ---------------------------------------------------------------------------
// U-statistic functionals

std::vector<double> psi_hat_batch(std::span<const double> data,
                                  std::span<const PsiTriple> triples, double g,
                                  const GaussianStart& start, const Kernel& kernel) {
    const std::size_t n = data.size();
    if (n < 2) throw std::invalid_argument("psi_hat: need n >= 2");
    if (!(g > 0.0)) throw std::invalid_argument("psi_hat: bandwidth must be positive");

    int max_p = 0;
    for (const auto& t : triples) {
        if (t.p < 0 || t.r < 0 || t.s < 0) {
            throw std::invalid_argument("psi_hat: indices must be nonnegative");
        }
        if (t.p > kernel.max_derivative_order()) {
            throw unsupported_order_error("psi_hat: derivative order " +
                                          std::to_string(t.p) + " unsupported");
        }
        max_p = std::max(max_p, t.p);
    }

    // canonical ascending accumulation order: the value is exchangeable in
    // the observations, bit for bit
    std::vector<double> x(data.begin(), data.end());
    std::sort(x.begin(), x.end());

    const std::size_t m = triples.size();
    std::vector<double> totals(m, 0.0);
    std::vector<double> row(m);
    std::vector<double> he(max_p + 1);

    for (std::size_t i = 0; i < n; ++i) {
        std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double z = (x[i] - x[j]) / g;
            const double phi = gauss_pdf(z);
            he[0] = 1.0;
            if (max_p >= 1) he[1] = z;
            for (int k = 2; k <= max_p; ++k) he[k] = z * he[k - 1] - (k - 1) * he[k - 2];
            for (std::size_t t = 0; t < m; ++t) {
                const double sgn = (triples[t].p % 2 == 0) ? 1.0 : -1.0;
                row[t] += sgn * he[triples[t].p] * phi;
            }
        }
        const double q1 = start.q1(x[i]);
        const double q2 = start.q2(x[i]);
        for (std::size_t t = 0; t < m; ++t) {
            totals[t] += ipow(q1, triples[t].r) * ipow(q2, triples[t].s) * row[t];
        }
    }

    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    for (std::size_t t = 0; t < m; ++t) {
        totals[t] /= ipow(g, triples[t].p + 1) * pairs;
    }
    return totals;
}

FunctionalEstimate psi_hat(std::span<const double> data, int p, int r, int s, double g,
                           const GaussianStart& start, const Kernel& kernel) {
    const PsiTriple t[] = {{p, r, s}};
    return {psi_hat_batch(data, t, g, start, kernel)[0], p, r, s, g};
}

double psi_tilde(std::span<const double> data, int p, int r, int s, int m,
                 const GaussianStart& start) {
    if (m < 3) throw std::invalid_argument("psi_tilde: need m >= 3");
    const auto hm = hermite_moments(data, m, start);
    const double n = static_cast<double>(data.size());
    const double sig = start.sigma();

    // inner[k] = n^-1 sum_i sigma^-1 phi(z_i) He_{k+p}(z_i) q1^r q2^s
    std::vector<double> inner(m + 1, 0.0);
    std::vector<double> he(m + p + 1);
    for (double x : data) {
        const double z = (x - start.mu()) / sig;
        he[0] = 1.0;
        if (m + p >= 1) he[1] = z;
        for (int k = 2; k <= m + p; ++k) he[k] = z * he[k - 1] - (k - 1) * he[k - 2];
        const double w = gauss_pdf(z) / sig * ipow(start.q1(x), r) * ipow(start.q2(x), s);
        for (int k = 0; k <= m; ++k) inner[k] += w * he[k + p];
    }

    double total = 0.0;
    for (int k = 0; k <= m; ++k) {
        total += hm.gamma_hat[k] / factorial(k) * inner[k] / n;
    }
    const double sgn = (p % 2 == 0) ? 1.0 : -1.0;
    return sgn / ipow(sig, p) * total;
}

LBrackets l_brackets(int p1, int p2, const Kernel& kernel) {
    const double m2_11 = kernel.moment(2, p1, p1);
    const double m0_22 = kernel.moment(0, p2, p2);
    const double m1_12 = kernel.moment(1, p1, p2);
    return {m2_11 + 4.0 * m0_22 + 4.0 * m1_12,
            4.0 * m1_12 + 2.0 * m2_11,
            4.0 * m0_22 + 2.0 * m1_12};
}

double lambda_sq(std::span<const double> data, double beta, int p1, int p2,
                 const GaussianStart& start, const Kernel& kernel) {
    const auto lb = l_brackets(p1, p2, kernel);
    const PsiTriple triples[] = {{0, 0, 2}, {0, 2, 1}, {0, 4, 0}};
    const auto psi = psi_hat_batch(data, triples, beta, start, kernel);
    return lb.l1 * psi[0] - lb.l2 * psi[1] + kernel.moment(2, p2, p2) * psi[2];
}

double kappa_sq(std::span<const double> data, double beta, int p2,
                const GaussianStart& start, const Kernel& kernel) {
    const auto psi = psi_hat(data, 0, 4, 0, beta, start, kernel);
    return 4.0 * kernel.moment(0, p2, p2) * psi.value;
}

std::pair<double, double> lambda_kappa_sq(std::span<const double> data, double beta,
                                          int p1, int p2, const GaussianStart& start,
                                          const Kernel& kernel) {
    return {lambda_sq(data, beta, p1, p2, start, kernel),
            kappa_sq(data, beta, p2, start, kernel)};
}

double beta_amse(double a, double b, double c, std::span<const double> data,
                 const GaussianStart& start, const Kernel& kernel, int pilot_m) {
    const double n = static_cast<double>(data.size());
    const double fallback = start.sigma() * std::pow(n, -0.4);

    // E_f[f {a q2^2 + b q1^2 q2 + c q1^4}^2] expanded over psi(0|r,s)
    const double num = a * a * psi_tilde(data, 0, 0, 4, pilot_m, start) +
                       (b * b + 2.0 * a * c) * psi_tilde(data, 0, 4, 2, pilot_m, start) +
                       c * c * psi_tilde(data, 0, 8, 0, pilot_m, start) +
                       2.0 * a * b * psi_tilde(data, 0, 2, 3, pilot_m, start) +
                       2.0 * b * c * psi_tilde(data, 0, 6, 1, pilot_m, start);
    const double combo = a * psi_tilde(data, 2, 0, 2, pilot_m, start) +
                         b * psi_tilde(data, 2, 2, 1, pilot_m, start) +
                         c * psi_tilde(data, 2, 4, 0, pilot_m, start);
    const double mu2 = kernel.mu2();
    const double den = mu2 * mu2 * combo * combo;
    if (!(num > 0.0) || !(den > 0.0) || !std::isfinite(num) || !std::isfinite(den)) {
        return fallback;
    }
    return std::pow(2.0 * kernel.roughness() * num / den, 0.2) * std::pow(n, -0.4);
}

// ---------------------------------------------------------------------------
// Six-stage functional-estimation selector

namespace {

double n_bracket_hat(std::span<const double> data, int p, double g,
                     const GaussianStart& start, const Kernel& kernel) {
    const PsiTriple triples[] = {{p, 2, 1}, {p + 3, 1, 0}, {p + 2, 0, 1}, {p + 1, 1, 1}};
    const auto v = psi_hat_batch(data, triples, g, start, kernel);
    return v[0] - v[1] - v[2] - v[3];
}

double d_bracket_hat(std::span<const double> data, int p, double g,
                     const GaussianStart& start, const Kernel& kernel) {
    const PsiTriple triples[] = {{p, 4, 0}, {p + 2, 2, 0}, {p + 1, 1, 1}};
    const auto v = psi_hat_batch(data, triples, g, start, kernel);
    return v[0] - v[1] - 2.0 * v[2];
}

double n_bracket_tilde(std::span<const double> data, int p, int m,
                       const GaussianStart& start) {
    return psi_tilde(data, p, 2, 1, m, start) - psi_tilde(data, p + 3, 1, 0, m, start) -
           psi_tilde(data, p + 2, 0, 1, m, start) - psi_tilde(data, p + 1, 1, 1, m, start);
}

double d_bracket_tilde(std::span<const double> data, int p, int m,
                       const GaussianStart& start) {
    return psi_tilde(data, p, 4, 0, m, start) - psi_tilde(data, p + 2, 2, 0, m, start) -
           2.0 * psi_tilde(data, p + 1, 1, 1, m, start);
}

[[noreturn]] void stage_fail(const char* what, const PipelineTrace& tr) {
    std::ostringstream os;
    os << "selector pipeline failed at " << what << "; partial trace:"
       << " Nt6=" << tr.n_tilde6 << " Dt6=" << tr.d_tilde6 << " gn1=" << tr.g_n1
       << " gd1=" << tr.g_d1 << " gn2=" << tr.g_n2 << " gd2=" << tr.g_d2
       << " gn3=" << tr.g_n3 << " gd3=" << tr.g_d3 << " g*=" << tr.g_amsre_star;
    throw stage_failure_error(os.str());
}

double checked_bandwidth(double value, const char* what, const PipelineTrace& tr) {
    if (!std::isfinite(value) || !(value > 0.0)) stage_fail(what, tr);
    return value;
}

}  // namespace

PipelineTrace pipeline(std::span<const double> data, const GaussianStart& start,
                       const Kernel& kernel) {
    if (data.size() < 50) {
        throw std::invalid_argument(
            "pipeline: needs n >= 50; high-order functional estimates are pure "
            "noise below that");
    }
    const double n = static_cast<double>(data.size());
    const double mu2 = kernel.mu2();
    const double mu2sq = mu2 * mu2;
    constexpr int m = 5;
    PipelineTrace tr{};

    // 1. Hermite-pilot estimates of the order-6 brackets.
    tr.n_tilde6 = n_bracket_tilde(data, 6, m, start);
    tr.d_tilde6 = d_bracket_tilde(data, 6, m, start);

    const auto lam_beta = [&](int p1, int p2) {
        const auto lb = l_brackets(p1, p2, kernel);
        return beta_amse(lb.l1, -lb.l2, kernel.moment(2, p2, p2), data, start, kernel, m);
    };
    const auto kap_beta = [&](int p2) {
        return beta_amse(0.0, 0.0, 4.0 * kernel.moment(0, p2, p2), data, start, kernel, m);
    };

    // 2. Order-6 variance constants -> first-stage bandwidths, n^(-2/17).
    tr.beta_n1 = lam_beta(7, 6);
    tr.beta_d1 = kap_beta(6);
    tr.lambda_sq_67 = lambda_sq(data, tr.beta_n1, 7, 6, start, kernel);
    tr.kappa_sq_6 = kappa_sq(data, tr.beta_d1, 6, start, kernel);
    if (tr.n_tilde6 == 0.0 || tr.d_tilde6 == 0.0) stage_fail("stage 1 pilot brackets", tr);
    tr.g_n1 = checked_bandwidth(
        std::pow(6.5 * tr.lambda_sq_67 / (mu2sq * tr.n_tilde6 * tr.n_tilde6), 1.0 / 17.0) *
            std::pow(n, -2.0 / 17.0),
        "g_n1", tr);
    tr.g_d1 = checked_bandwidth(
        std::pow(6.5 * tr.kappa_sq_6 / (mu2sq * tr.d_tilde6 * tr.d_tilde6), 1.0 / 17.0) *
            std::pow(n, -2.0 / 17.0),
        "g_d1", tr);

    // 3. Order-4 brackets at the first-stage bandwidths, n^(-2/13).
    tr.beta_n2 = lam_beta(5, 4);
    tr.beta_d2 = kap_beta(4);
    tr.lambda_sq_45 = lambda_sq(data, tr.beta_n2, 5, 4, start, kernel);
    tr.kappa_sq_4 = kappa_sq(data, tr.beta_d2, 4, start, kernel);
    tr.n_hat4 = n_bracket_hat(data, 4, tr.g_n1, start, kernel);
    tr.d_hat4 = d_bracket_hat(data, 4, tr.g_d1, start, kernel);
    if (tr.n_hat4 == 0.0 || tr.d_hat4 == 0.0) stage_fail("stage 3 brackets", tr);
    tr.g_n2 = checked_bandwidth(
        std::pow(4.5 * tr.lambda_sq_45 / (mu2sq * tr.n_hat4 * tr.n_hat4), 1.0 / 13.0) *
            std::pow(n, -2.0 / 13.0),
        "g_n2", tr);
    tr.g_d2 = checked_bandwidth(
        std::pow(4.5 * tr.kappa_sq_4 / (mu2sq * tr.d_hat4 * tr.d_hat4), 1.0 / 13.0) *
            std::pow(n, -2.0 / 13.0),
        "g_d2", tr);

    // 4. Order-2 brackets, n^(-2/9).
    tr.beta_n3 = lam_beta(3, 2);
    tr.beta_d3 = kap_beta(2);
    tr.lambda_sq_23 = lambda_sq(data, tr.beta_n3, 3, 2, start, kernel);
    tr.kappa_sq_2 = kappa_sq(data, tr.beta_d3, 2, start, kernel);
    tr.n_hat2 = n_bracket_hat(data, 2, tr.g_n2, start, kernel);
    tr.d_hat2 = d_bracket_hat(data, 2, tr.g_d2, start, kernel);
    if (tr.n_hat2 == 0.0 || tr.d_hat2 == 0.0) stage_fail("stage 4 brackets", tr);
    tr.g_n3 = checked_bandwidth(
        std::pow(2.5 * tr.lambda_sq_23 / (mu2sq * tr.n_hat2 * tr.n_hat2), 1.0 / 9.0) *
            std::pow(n, -2.0 / 9.0),
        "g_n3", tr);
    tr.g_d3 = checked_bandwidth(
        std::pow(2.5 * tr.kappa_sq_2 / (mu2sq * tr.d_hat2 * tr.d_hat2), 1.0 / 9.0) *
            std::pow(n, -2.0 / 9.0),
        "g_d3", tr);

    // 5. Relative-error bandwidth combining both chains.
    tr.n_hat0 = n_bracket_hat(data, 0, tr.g_n3, start, kernel);
    tr.d_hat0 = d_bracket_hat(data, 0, tr.g_d3, start, kernel);
    const auto lb32 = l_brackets(3, 2, kernel);
    const double N0 = tr.n_hat0, D0 = tr.d_hat0;
    const double a5 = D0 * D0 * lb32.l1;
    const double b5 = -(D0 * D0 * lb32.l2 + 2.0 * N0 * D0 * lb32.l3);
    const double c5 = D0 * D0 * kernel.moment(2, 2, 2) +
                      4.0 * N0 * N0 * kernel.moment(0, 2, 2) +
                      4.0 * N0 * D0 * kernel.moment(1, 2, 3);
    tr.beta_0 = beta_amse(a5, b5, c5, data, start, kernel, m);
    {
        const PsiTriple triples[] = {{0, 0, 2}, {0, 2, 1}, {0, 4, 0}};
        const auto psi = psi_hat_batch(data, triples, tr.beta_0, start, kernel);
        const double bracket = a5 * psi[0] + b5 * psi[1] + c5 * psi[2];
        const double rel = D0 * tr.n_hat2 - N0 * tr.d_hat2;
        if (rel == 0.0 || !(bracket > 0.0)) stage_fail("stage 5 AMSRE bracket", tr);
        tr.g_amsre_star = checked_bandwidth(
            std::pow(2.5 / (mu2sq * rel * rel), 1.0 / 9.0) * std::pow(bracket, 1.0 / 9.0) *
                std::pow(n, -2.0 / 9.0),
            "g_amsre_star", tr);
    }

    // 6. The two index estimates.
    tr.n_star = n_bracket_hat(data, 0, tr.g_amsre_star, start, kernel);
    tr.d_star = d_bracket_hat(data, 0, tr.g_amsre_star, start, kernel);
    if (std::fabs(tr.d_star) < 1e-300 || std::fabs(tr.d_hat0) < 1e-300) {
        throw selector_degenerate_error(
            "pipeline: denominator functional vanished; recommend alpha = 2");
    }
    tr.alpha_hat_2 = 1.0 + 0.5 * tr.n_star / tr.d_star;
    tr.alpha_hat_3 = 1.0 + 0.5 * tr.n_hat0 / tr.d_hat0;
    return tr;
}

FinalBandwidth h_final(std::span<const double> data, const Kernel& kernel) {
    const auto sel = alpha_hat_1(data, kernel);
    const double n = static_cast<double>(data.size());
    const double a = sel.alpha;
    const auto& c = sel.kernel_coeffs;
    const double r_hat = c.c1 * a * a - 2.0 * c.c2 * a + c.c3;
    if (!(r_hat > 0.0)) {
        throw selector_degenerate_error("final bandwidth: kernel-based squared bias is zero");
    }
    const double h5 = ipow(sel.h_bar, 5);
    double r_dag = n / (n - 1.0) * (r_hat - kernel.roughness(2) / (n * h5));
    const bool floored = r_dag < 0.01 * r_hat;
    if (floored) r_dag = 0.01 * r_hat;

    const double mu2 = kernel.mu2();
    const double h = std::pow(kernel.roughness() / (mu2 * mu2), 0.2) *
                     std::pow(r_dag, -0.2) * std::pow(n, -0.2);
    return {h, a, sel.h_bar, r_hat, r_dag, floored};
}

}  // namespace semidens

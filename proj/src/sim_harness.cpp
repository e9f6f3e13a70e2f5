#include "semidens/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "semidens/errors.hpp"
#include "semidens/index_selection.hpp"
#include "semidens/parallel.hpp"

namespace semidens {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double se_of(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(v.size() - 1) * static_cast<double>(v.size())));
}

}  // namespace

EstimatorSpec EstimatorSpec::selector(int method) {
    switch (method) {
        case 1: return {Kind::Auto1, 0.0};
        case 2: return {Kind::Auto2, 0.0};
        case 3: return {Kind::Auto3, 0.0};
        default: throw std::invalid_argument("selector method must be 1, 2 or 3");
    }
}

std::string EstimatorSpec::label() const {
    switch (kind) {
        case Kind::Traditional: return "ftilde";
        case Kind::FixedAlpha: {
            // trim trailing zeros for readable labels
            std::string s = std::to_string(alpha);
            s.erase(s.find_last_not_of('0') + 1);
            if (!s.empty() && s.back() == '.') s.pop_back();
            return "alpha=" + s;
        }
        case Kind::Auto1: return "auto1";
        case Kind::Auto2: return "auto2";
        case Kind::Auto3: return "auto3";
    }
    return "?";
}

double resolve_alpha(const EstimatorSpec& spec, std::span<const double> sample,
                     bool* fell_back) {
    if (fell_back) *fell_back = false;
    switch (spec.kind) {
        case EstimatorSpec::Kind::Traditional: return kNaN;
        case EstimatorSpec::Kind::FixedAlpha: return spec.alpha;
        case EstimatorSpec::Kind::Auto1:
            try {
                return alpha_hat_1(sample).alpha;
            } catch (const selector_degenerate_error&) {
                if (fell_back) *fell_back = true;
                return 2.0;
            }
        case EstimatorSpec::Kind::Auto2:
        case EstimatorSpec::Kind::Auto3:
            try {
                const auto tr = pipeline(sample, GaussianStart::fit_mle(sample));
                return spec.kind == EstimatorSpec::Kind::Auto2 ? tr.alpha_hat_2
                                                               : tr.alpha_hat_3;
            } catch (const selector_degenerate_error&) {
                if (fell_back) *fell_back = true;
                return 2.0;
            } catch (const stage_failure_error&) {
                if (fell_back) *fell_back = true;
                return 2.0;
            }
    }
    return kNaN;
}

std::vector<double> estimator_curve(const EstimatorSpec& spec,
                                    std::span<const double> sample, double alpha,
                                    double h, std::span<const double> grid) {
    std::vector<double> out(grid.size());
    if (spec.kind == EstimatorSpec::Kind::Traditional) {
        const Kernel& k = gaussian_kernel();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out[i] = kde(sample, h, k, grid[i]);
        }
        return out;
    }
    const EstimatorConfig cfg{alpha, h, gaussian_kernel(), GaussianStart::fit_mle(sample)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = fhat_alpha(sample, grid[i], cfg);
    }
    return out;
}

std::vector<double> ise_grid(const TrueDensity& truth, double h_max) {
    const auto [lo0, hi0] = truth.support_hint();
    const double lo = lo0 - 4.0 * h_max;
    const double hi = hi0 + 4.0 * h_max;
    std::size_t points = std::max<std::size_t>(
        401, static_cast<std::size_t>(std::ceil((hi - lo) / (truth.min_scale() / 4.0))));
    points = std::min<std::size_t>(points, 8001);
    if (points % 2 == 0) ++points;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

double ise(std::span<const double> grid, std::span<const double> values,
           const TrueDensity& truth) {
    if (grid.size() != values.size() || grid.size() < 3) {
        throw std::invalid_argument("ise: grid and values must match, length >= 3");
    }
    const auto sq = [&](std::size_t i) {
        const double d = values[i] - truth.pdf(grid[i]);
        return d * d;
    };
    const double left = sq(0), right = sq(grid.size() - 1);
    if (left > 1e-8 || right > 1e-8) {
        throw std::invalid_argument("ise: grid too narrow, boundary integrand " +
                                    std::to_string(std::max(left, right)));
    }
    // composite Simpson; one trapezoid panel at the end for even counts
    const double dx = grid[1] - grid[0];
    double s = 0.0;
    std::size_t i = 0;
    for (; i + 2 < grid.size(); i += 2) {
        s += dx / 3.0 * (sq(i) + 4.0 * sq(i + 1) + sq(i + 2));
    }
    if (i + 1 < grid.size()) s += 0.5 * dx * (sq(i) + sq(i + 1));
    return s;
}

double ise(const DensityEstimate& estimate, const TrueDensity& truth) {
    return ise(estimate.grid, estimate.values, truth);
}

MiseEstimate mise(const TrueDensity& truth, const EstimatorSpec& spec, std::size_t n,
                  double h, std::size_t reps, std::uint64_t seed) {
    if (reps < 2) throw std::invalid_argument("mise: need reps >= 2");
    const auto grid = ise_grid(truth, h);
    std::vector<double> vals(reps, kNaN);
    parallel_for(reps, [&](std::size_t r) {
        const auto sample = truth.sample(n, seed, r);
        try {
            const double a = resolve_alpha(spec, sample);
            vals[r] = ise(grid, estimator_curve(spec, sample, a, h, grid), truth);
        } catch (const std::exception&) {
            // recorded below as a failed replication
        }
    });
    std::vector<double> ok;
    ok.reserve(reps);
    for (double v : vals) {
        if (!std::isnan(v)) ok.push_back(v);
    }
    const std::size_t failures = reps - ok.size();
    if (failures * 100 > reps) {
        throw harness_error("mise: " + std::to_string(failures) + "/" +
                            std::to_string(reps) + " replications failed");
    }
    return {mean_of(ok), se_of(ok), failures};
}

namespace {

std::vector<double> log_spaced(double lo, double hi, std::size_t k) {
    std::vector<double> v(k);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < k; ++i) {
        v[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                  static_cast<double>(k - 1));
    }
    return v;
}

}  // namespace

SimResult grid_search(const TrueDensity& truth, const EstimatorSpec& spec,
                      std::size_t n, std::size_t reps, std::uint64_t seed,
                      std::pair<double, double> h_range, std::size_t coarse_points,
                      std::size_t refine_points) {
    if (!(h_range.first > 0.0) || !(h_range.second > h_range.first)) {
        throw std::invalid_argument("grid_search: h_range must be a positive interval");
    }
    if (reps < 2) throw std::invalid_argument("grid_search: need reps >= 2");

    SimResult res;
    res.density_id = truth.label();
    res.estimator_label = spec.label();
    res.n = n;
    res.reps = reps;
    res.seed = seed;

    // Common random numbers: one sample and one resolved index per
    // replication, shared by every bandwidth.
    std::vector<std::vector<double>> samples(reps);
    std::vector<double> alphas(reps);
    std::vector<char> rep_failed(reps, 0);
    std::atomic<std::size_t> fallbacks{0};
    parallel_for(reps, [&](std::size_t r) {
        samples[r] = truth.sample(n, seed, r);
        bool fb = false;
        try {
            alphas[r] = resolve_alpha(spec, samples[r], &fb);
        } catch (const std::exception&) {
            rep_failed[r] = 1;
        }
        if (fb) fallbacks.fetch_add(1, std::memory_order_relaxed);
    });
    res.fallbacks = fallbacks.load();

    const auto grid = ise_grid(truth, h_range.second);

    // ise_matrix[h][rep]; NaN marks a failed replication
    const auto eval_hs = [&](const std::vector<double>& hs) {
        std::vector<std::vector<double>> m(hs.size(), std::vector<double>(reps, kNaN));
        parallel_for(reps, [&](std::size_t r) {
            if (rep_failed[r]) return;
            for (std::size_t k = 0; k < hs.size(); ++k) {
                try {
                    m[k][r] = ise(grid,
                                  estimator_curve(spec, samples[r], alphas[r], hs[k], grid),
                                  truth);
                } catch (const std::exception&) {
                    rep_failed[r] = 1;
                    break;
                }
            }
        });
        return m;
    };

    std::vector<double> hs = log_spaced(h_range.first, h_range.second, coarse_points);
    auto mat = eval_hs(hs);

    const auto drop_failed_and_summarize = [&](const std::vector<double>& all_h,
                                               std::vector<std::vector<double>>& all_ise) {
        std::size_t failed = 0;
        for (char f : rep_failed) failed += f;
        if (failed * 100 > reps) {
            throw harness_error("grid_search: " + std::to_string(failed) + "/" +
                                std::to_string(reps) + " replications failed");
        }
        res.failures = failed;
        res.h_grid = all_h;
        res.mise.assign(all_h.size(), 0.0);
        res.se.assign(all_h.size(), 0.0);
        for (std::size_t k = 0; k < all_h.size(); ++k) {
            std::vector<double> ok;
            ok.reserve(reps);
            for (std::size_t r = 0; r < reps; ++r) {
                if (!rep_failed[r] && !std::isnan(all_ise[k][r])) ok.push_back(all_ise[k][r]);
            }
            res.mise[k] = mean_of(ok);
            res.se[k] = se_of(ok);
        }
    };

    // coarse minimizer, ties toward smaller h
    std::size_t best = 0;
    {
        std::vector<double> coarse_mise(hs.size());
        for (std::size_t k = 0; k < hs.size(); ++k) {
            std::vector<double> ok;
            for (std::size_t r = 0; r < reps; ++r) {
                if (!rep_failed[r] && !std::isnan(mat[k][r])) ok.push_back(mat[k][r]);
            }
            coarse_mise[k] = ok.empty() ? std::numeric_limits<double>::infinity()
                                        : mean_of(ok);
        }
        for (std::size_t k = 1; k < hs.size(); ++k) {
            if (coarse_mise[k] < coarse_mise[best]) best = k;
        }
    }

    // refinement bracket around the coarse minimizer
    const double lo = hs[best == 0 ? 0 : best - 1];
    const double hi = hs[std::min(best + 1, hs.size() - 1)];
    std::vector<double> fine = log_spaced(lo, hi, refine_points);
    auto fine_mat = eval_hs(fine);

    // merge, keeping h ascending and unique
    std::vector<double> all_h = hs;
    all_h.insert(all_h.end(), fine.begin(), fine.end());
    std::vector<std::vector<double>> all_ise = std::move(mat);
    all_ise.insert(all_ise.end(), fine_mat.begin(), fine_mat.end());
    std::vector<std::size_t> order(all_h.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return all_h[a] < all_h[b];
    });
    std::vector<double> sorted_h;
    std::vector<std::vector<double>> sorted_ise;
    for (std::size_t idx : order) {
        if (!sorted_h.empty() && all_h[idx] == sorted_h.back()) continue;
        sorted_h.push_back(all_h[idx]);
        sorted_ise.push_back(std::move(all_ise[idx]));
    }

    drop_failed_and_summarize(sorted_h, sorted_ise);

    std::size_t kmin = 0;
    for (std::size_t k = 1; k < res.mise.size(); ++k) {
        if (res.mise[k] < res.mise[kmin]) kmin = k;
    }
    res.min_mise = res.mise[kmin];
    res.se_at_min = res.se[kmin];
    res.h_at_min = res.h_grid[kmin];
    res.boundary_warning = (kmin == 0 || kmin + 1 == res.mise.size());
    res.ise_at_min.assign(reps, kNaN);
    for (std::size_t r = 0; r < reps; ++r) {
        if (!rep_failed[r]) res.ise_at_min[r] = sorted_ise[kmin][r];
    }
    return res;
}

RobustSummary robust_summary(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("robust_summary: empty input");
    std::vector<double> v(values.begin(), values.end());
    const auto median_of = [](std::vector<double>& w) {
        const std::size_t mid = w.size() / 2;
        std::nth_element(w.begin(), w.begin() + mid, w.end());
        double m = w[mid];
        if (w.size() % 2 == 0) {
            m = 0.5 * (m + *std::max_element(w.begin(), w.begin() + mid));
        }
        return m;
    };
    const double med = median_of(v);
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::fabs(v[i] - med);
    const double mad = median_of(dev);
    return {med, 1.4826 * mad / std::sqrt(static_cast<double>(v.size()))};
}

PairedDiff paired_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired_diff: length mismatch");
    std::vector<double> d;
    d.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isnan(a[i]) && !std::isnan(b[i])) d.push_back(a[i] - b[i]);
    }
    if (d.size() < 2) throw std::invalid_argument("paired_diff: fewer than 2 valid pairs");
    return {mean_of(d), se_of(d), d.size()};
}

}  // namespace semidens

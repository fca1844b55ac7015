#include "rocem/estimators.hpp"

#include "rocem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rocem {

namespace {

double log_sum_exp(const Eigen::VectorXd& v) {
    const double hi = v.maxCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::exp(v[i] - hi);
    return hi + std::log(acc);
}

void finalize_cums(WeightedCdfPair& out) {
    const Eigen::Index k = static_cast<Eigen::Index>(out.support.size());
    out.cum0.resize(k);
    out.cum1.resize(k);
    double c0 = 0.0, c1 = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        c0 += out.w0[i];
        c1 += out.w1[i];
        out.cum0[i] = c0;
        out.cum1[i] = c1;
    }
    // pin the totals to exactly one
    if (c0 > 0.0) {
        out.w0 /= c0;
        out.cum0 /= c0;
    }
    if (c1 > 0.0) {
        out.w1 /= c1;
        out.cum1 /= c1;
    }
    if (k > 0) {
        out.cum0[k - 1] = 1.0;
        out.cum1[k - 1] = 1.0;
    }
}

} // namespace

double WeightedCdfPair::f0(double t) const {
    const auto it = std::upper_bound(support.begin(), support.end(), t);
    const auto idx = it - support.begin();
    return idx == 0 ? 0.0 : cum0[idx - 1];
}

double WeightedCdfPair::f1(double t) const {
    const auto it = std::upper_bound(support.begin(), support.end(), t);
    const auto idx = it - support.begin();
    return idx == 0 ? 0.0 : cum1[idx - 1];
}

int WeightedCdfPair::quantile_index0(double q) const {
    const auto it = std::lower_bound(cum0.data(), cum0.data() + cum0.size(), q);
    const auto idx = it - cum0.data();
    return static_cast<int>(std::min<std::ptrdiff_t>(idx, cum0.size() - 1));
}

WeightedCdfPair make_weighted_cdfs(const std::vector<double>& t_vals,
                                   const Eigen::VectorXd& h_vals, double lambda_star) {
    if (t_vals.size() != static_cast<std::size_t>(h_vals.size()))
        throw Error("length-mismatch", "values and h values differ in length");
    if (t_vals.empty()) throw Error("empty-input", "no observations");
    const std::size_t n = t_vals.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return t_vals[a] < t_vals[b]; });

    // log weights: log w0 ~ -log(1-ls+ls e^h), log w1 ~ log w0 + h
    Eigen::VectorXd lw0(n), lw1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = h_vals[static_cast<Eigen::Index>(order[i])];
        lw0[static_cast<Eigen::Index>(i)] = -log_a_plus_b_exp(1.0 - lambda_star, lambda_star, h);
        lw1[static_cast<Eigen::Index>(i)] = lw0[static_cast<Eigen::Index>(i)] + h;
    }
    const double z0 = log_sum_exp(lw0);
    const double z1 = log_sum_exp(lw1);

    WeightedCdfPair out;
    out.support.reserve(n);
    std::vector<double> w0v, w1v;
    w0v.reserve(n);
    w1v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_vals[order[i]];
        const double a0 = std::exp(lw0[static_cast<Eigen::Index>(i)] - z0);
        const double a1 = std::exp(lw1[static_cast<Eigen::Index>(i)] - z1);
        if (!out.support.empty() && t == out.support.back()) {
            w0v.back() += a0;
            w1v.back() += a1;
        } else {
            out.support.push_back(t);
            w0v.push_back(a0);
            w1v.push_back(a1);
        }
    }
    out.w0 = Eigen::Map<Eigen::VectorXd>(w0v.data(), static_cast<Eigen::Index>(w0v.size()));
    out.w1 = Eigen::Map<Eigen::VectorXd>(w1v.data(), static_cast<Eigen::Index>(w1v.size()));
    finalize_cums(out);
    return out;
}

WeightedCdfPair cdfs_from_step_values(const std::vector<double>& support,
                                      const std::vector<double>& f0_vals,
                                      const std::vector<double>& f1_vals) {
    if (support.size() != f0_vals.size() || support.size() != f1_vals.size())
        throw Error("length-mismatch", "support and CDF values differ in length");
    if (support.empty()) throw Error("empty-input", "no support points");

    WeightedCdfPair out;
    out.support = support;
    const Eigen::Index k = static_cast<Eigen::Index>(support.size());
    out.w0.resize(k);
    out.w1.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double prev0 = i == 0 ? 0.0 : f0_vals[i - 1];
        const double prev1 = i == 0 ? 0.0 : f1_vals[i - 1];
        out.w0[i] = std::max(0.0, f0_vals[i] - prev0);
        out.w1[i] = std::max(0.0, f1_vals[i] - prev1);
    }
    finalize_cums(out);
    return out;
}

WeightedCdfPair estimate_cdfs(const DensityRatioFit& fit, const TwoSampleData& data) {
    return make_weighted_cdfs(data.t, fit.h_values(data.t), fit.consts.lambda_star);
}

std::vector<double> roc_curve(const WeightedCdfPair& cdfs, const std::vector<double>& s_grid) {
    std::vector<double> out(s_grid.size());
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const int idx = cdfs.quantile_index0(1.0 - s_grid[i]);
        out[i] = 1.0 - cdfs.cum1[idx];
    }
    return out;
}

double auc(const WeightedCdfPair& cdfs) {
    double area = 0.0;
    double below = 0.0; // F0 mass strictly below the current support point
    for (Eigen::Index i = 0; i < cdfs.w0.size(); ++i) {
        area += cdfs.w1[i] * (below + 0.5 * cdfs.w0[i]);
        below += cdfs.w0[i];
    }
    return area;
}

double pauc(const WeightedCdfPair& cdfs, double s0, double s1) {
    if (!(s0 >= 0.0 && s0 < s1 && s1 <= 1.0))
        throw Error("bad-interval", "partial AUC needs 0 <= s0 < s1 <= 1");
    constexpr int kPoints = 2001;
    std::vector<double> grid(kPoints);
    for (int i = 0; i < kPoints; ++i)
        grid[i] = s0 + (s1 - s0) * i / (kPoints - 1);
    const std::vector<double> roc = roc_curve(cdfs, grid);
    double integral = 0.0;
    for (int i = 0; i + 1 < kPoints; ++i)
        integral += 0.5 * (roc[i] + roc[i + 1]) * (grid[i + 1] - grid[i]);
    return integral / (s1 - s0);
}

YoudenResult youden_from_cdfs(const WeightedCdfPair& cdfs) {
    YoudenResult best{-2.0, cdfs.support.front()};
    for (std::size_t i = 0; i < cdfs.support.size(); ++i) {
        const double gap = cdfs.cum0[static_cast<Eigen::Index>(i)] -
                           cdfs.cum1[static_cast<Eigen::Index>(i)];
        if (gap > best.j) {
            best.j = gap;
            best.cutoff_unit = cdfs.support[i];
        }
    }
    return best;
}

YoudenResult youden(const DensityRatioFit& fit, const WeightedCdfPair& cdfs) {
    constexpr int kPoints = 2001;
    std::vector<double> roots;
    double prev_t = 0.0;
    double prev_h = fit.h_at(0.0);
    if (prev_h == 0.0) roots.push_back(0.0);
    for (int i = 1; i < kPoints; ++i) {
        const double t = static_cast<double>(i) / (kPoints - 1);
        const double h = fit.h_at(t);
        if (h == 0.0) {
            roots.push_back(t);
        } else if (prev_h != 0.0 && std::signbit(h) != std::signbit(prev_h)) {
            double lo = prev_t, hi = t, flo = prev_h;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double fm = fit.h_at(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_h = h;
    }

    if (roots.empty()) return youden_from_cdfs(cdfs);

    YoudenResult best{-2.0, roots.front()};
    for (double c : roots) {
        const double gap = cdfs.f0(c) - cdfs.f1(c);
        if (gap > best.j) {
            best.j = gap;
            best.cutoff_unit = c;
        }
    }
    return best;
}

RocSummary summarize(const WeightedCdfPair& cdfs, const YoudenResult& yj,
                     const std::vector<double>& s_grid, double s0, double s1,
                     const DomainTransform& transform) {
    RocSummary out;
    out.s_grid = s_grid;
    out.roc = roc_curve(cdfs, s_grid);
    out.auc = auc(cdfs);
    out.pauc = pauc(cdfs, s0, s1);
    out.s0 = s0;
    out.s1 = s1;
    out.youden_j = yj.j;
    out.cutoff_unit = yj.cutoff_unit;
    out.cutoff_raw = transform.from_unit(yj.cutoff_unit);
    return out;
}

RocDeltas compare_markers(const RocSummary& a, const RocSummary& b) {
    if (a.s_grid != b.s_grid)
        throw Error("grid-mismatch", "marker summaries use different s grids");
    RocDeltas d;
    d.s_grid = a.s_grid;
    d.droc.resize(a.roc.size());
    for (std::size_t i = 0; i < a.roc.size(); ++i) d.droc[i] = a.roc[i] - b.roc[i];
    d.dauc = a.auc - b.auc;
    d.dpauc = a.pauc - b.pauc;
    d.dyouden = a.youden_j - b.youden_j;
    return d;
}

} // namespace rocem

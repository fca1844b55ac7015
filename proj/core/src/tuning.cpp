#include "rocem/tuning.hpp"

#include "rocem/errors.hpp"
#include "rocem/parallel.hpp"
#include "rocem/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rocem {

std::vector<double> default_nu_grid(double lo, double hi, int points) {
    if (!(lo > 0.0 && hi > lo) || points < 1)
        throw Error("invalid-grid", "nu grid needs 0 < lo < hi and at least one point");
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = lo;
        return grid;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i)
        grid[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
    return grid;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int n_folds,
                                  std::uint64_t seed) {
    if (n_folds < 2) throw Error("invalid-folds", "need at least 2 folds");
    std::vector<int> fold(labels.size(), 0);
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) idx.push_back(static_cast<int>(i));
        auto rng = substream(seed, static_cast<std::uint64_t>(cls) + 101);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t k = 0; k < idx.size(); ++k)
            fold[idx[k]] = static_cast<int>(k % n_folds);
    }
    return fold;
}

std::size_t select_nu_index(const std::vector<double>& scores) {
    std::size_t best = scores.size();
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) continue;
        if (best == scores.size() || scores[i] >= best_score) { // >=: larger nu wins ties
            best = i;
            best_score = scores[i];
        }
    }
    if (best == scores.size())
        throw Error("all-fits-failed", "every cross-validation fit failed");
    return best;
}

CvResult cv_select_nu_with_folds(const TwoSampleData& data, const SplineBasis& basis,
                                 const MixtureRates& rates, const std::vector<int>& fold_ids,
                                 const std::vector<double>& nu_grid, const EmOptions& opts,
                                 unsigned n_threads) {
    if (fold_ids.size() != data.t.size())
        throw Error("length-mismatch", "fold assignment does not match the sample");
    if (nu_grid.empty()) throw Error("invalid-grid", "empty nu grid");

    const int n_folds = *std::max_element(fold_ids.begin(), fold_ids.end()) + 1;
    std::vector<std::vector<int>> train_idx(n_folds), test_idx(n_folds);
    for (std::size_t i = 0; i < fold_ids.size(); ++i) {
        for (int f = 0; f < n_folds; ++f)
            (fold_ids[i] == f ? test_idx[f] : train_idx[f]).push_back(static_cast<int>(i));
    }

    const std::size_t n_jobs = static_cast<std::size_t>(n_folds) * nu_grid.size();
    std::vector<double> job_score(n_jobs, std::numeric_limits<double>::quiet_NaN());

    parallel_for(
        n_jobs,
        [&](std::size_t job) {
            const int f = static_cast<int>(job % n_folds);
            const std::size_t g = job / n_folds;
            try {
                const TwoSampleData train = subset(data, train_idx[f]);
                const DensityRatioFit fit = fit_em(train, basis, rates, nu_grid[g], opts);

                std::vector<double> t_out;
                std::vector<int> r_out;
                for (int i : test_idx[f]) {
                    t_out.push_back(data.t[i]);
                    r_out.push_back(data.r[i]);
                }
                job_score[job] =
                    observed_loglik(fit.h_values(t_out), r_out, fit.consts, rates);
            } catch (const Error&) {
                // leave NaN: this (fold, nu) combination is dropped
            }
        },
        n_threads);

    CvResult res;
    res.nu_grid = nu_grid;
    res.scores.assign(nu_grid.size(), 0.0);
    for (std::size_t g = 0; g < nu_grid.size(); ++g) {
        double total = 0.0;
        bool ok = true;
        for (int f = 0; f < n_folds; ++f) {
            const double s = job_score[g * n_folds + f];
            if (std::isnan(s)) {
                ok = false;
                ++res.n_failed_fits;
            } else {
                total += s;
            }
        }
        res.scores[g] = ok ? total : -std::numeric_limits<double>::infinity();
    }
    res.nu_star = nu_grid[select_nu_index(res.scores)];
    return res;
}

CvResult cv_select_nu(const TwoSampleData& data, const SplineBasis& basis,
                      const MixtureRates& rates, const CvPlan& plan, const EmOptions& opts) {
    if (plan.n_folds < 2) throw Error("invalid-folds", "need at least 2 folds");
    if (data.n() < plan.n_folds || data.m() < plan.n_folds)
        throw Error("insufficient-data",
                    "each label class needs at least n_folds observations");
    const std::vector<double> grid =
        plan.nu_grid.empty() ? default_nu_grid() : plan.nu_grid;
    if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() <= 0.0)
        throw Error("invalid-grid", "nu grid must be positive and strictly increasing");

    const std::vector<int> folds = stratified_folds(data.r, plan.n_folds, plan.seed);
    return cv_select_nu_with_folds(data, basis, rates, folds, grid, opts, plan.n_threads);
}

} // namespace rocem

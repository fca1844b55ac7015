#pragma once

#include "rocem/likelihood.hpp"
#include "rocem/solver.hpp"

#include <Eigen/Core>

#include <vector>

namespace rocem {

/// Weighted step-function CDF pair on a common sorted support. w0 and w1 are
/// self-normalized (each sums to one); cum0/cum1 are their running totals with
/// the last entry pinned to exactly 1.
struct WeightedCdfPair {
    std::vector<double> support; // sorted, duplicates merged
    Eigen::VectorXd w0, w1;
    Eigen::VectorXd cum0, cum1;

    /// Right-continuous evaluation F(t) = sum of weights at support <= t.
    double f0(double t) const;
    double f1(double t) const;

    /// Generalized inverse: index of the first support point with cum0 >= q.
    int quantile_index0(double q) const;
};

/// Hajek-type weighted CDFs from pooled values and their fitted log density
/// ratio: point i gets mass proportional to 1/(1-lambda_star+lambda_star e^{h_i})
/// under F0 and additionally e^{h_i} under F1.
WeightedCdfPair make_weighted_cdfs(const std::vector<double>& t_vals,
                                   const Eigen::VectorXd& h_vals, double lambda_star);

/// CDF pair from non-decreasing step values given on a sorted support
/// (used by the inversion baseline). Values are differenced into weights;
/// tiny negative increments from round-off are clipped to zero.
WeightedCdfPair cdfs_from_step_values(const std::vector<double>& support,
                                      const std::vector<double>& f0_vals,
                                      const std::vector<double>& f1_vals);

WeightedCdfPair estimate_cdfs(const DensityRatioFit& fit, const TwoSampleData& data);

/// ROC(s) = 1 - F1(F0^{-1}(1-s)) evaluated on the given grid (values in (0,1),
/// sorted ascending). Non-decreasing in s by construction.
std::vector<double> roc_curve(const WeightedCdfPair& cdfs, const std::vector<double>& s_grid);

/// Exact area under the step-function ROC via the rank-sum bilinear form
/// sum_ij w0_i w1_j [1(T_j > T_i) + 1/2 1(T_j = T_i)].
double auc(const WeightedCdfPair& cdfs);

/// Normalized partial area over [s0, s1], trapezoid rule on a 2001-point grid.
/// Throws Error("bad-interval") unless 0 <= s0 < s1 <= 1.
double pauc(const WeightedCdfPair& cdfs, double s0, double s1);

struct YoudenResult {
    double j = 0.0;
    double cutoff_unit = 0.0;
};

/// Youden's index via the zero set of the fitted log density ratio: all sign
/// changes of h on a 2001-point grid are refined by bisection and the root
/// maximizing F0 - F1 wins. If h never crosses zero, falls back to the support
/// point maximizing F0 - F1.
YoudenResult youden(const DensityRatioFit& fit, const WeightedCdfPair& cdfs);

/// Youden's index as the support-point maximizer of F0 - F1 (used by the
/// fully nonparametric baseline, which has no fitted h).
YoudenResult youden_from_cdfs(const WeightedCdfPair& cdfs);

/// Summary of one marker's ROC analysis; the shared shape every estimator
/// (EM, inversion baseline, naive) reports.
struct RocSummary {
    std::vector<double> s_grid;
    std::vector<double> roc;
    double auc = 0.0;
    double pauc = 0.0;
    double s0 = 0.0, s1 = 1.0;
    double youden_j = 0.0;
    double cutoff_unit = 0.0;
    double cutoff_raw = 0.0;
};

RocSummary summarize(const WeightedCdfPair& cdfs, const YoudenResult& yj,
                     const std::vector<double>& s_grid, double s0, double s1,
                     const DomainTransform& transform);

struct RocDeltas {
    std::vector<double> s_grid;
    std::vector<double> droc;
    double dauc = 0.0;
    double dpauc = 0.0;
    double dyouden = 0.0;
};

/// Elementwise marker-1 minus marker-2 differences. Throws
/// Error("grid-mismatch") when the two summaries use different s grids.
RocDeltas compare_markers(const RocSummary& a, const RocSummary& b);

} // namespace rocem

#pragma once

#include "rocem/basis.hpp"

#include <Eigen/Core>

#include <vector>

namespace rocem {

/// Known accuracy of the imperfect reference standard: pi0 = P(G=0 | R=0) and
/// pi1 = P(G=1 | R=1). Identifiability requires pi0 + pi1 > 1.
struct MixtureRates {
    double pi0 = 1.0;
    double pi1 = 1.0;
};

/// Validates ranges ((0,1] each) and the identifiability condition
/// pi0 + pi1 > 1; throws Error("invalid-rate") / Error("identifiability-violation").
MixtureRates make_rates(double pi0, double pi1);

/// Two-sample biomarker data: nominal controls x (R=0) and nominal cases y
/// (R=1) on the raw scale, with the affine rescaling onto [0,1] and the pooled
/// scaled sample. Pooled order is all of x followed by all of y.
struct TwoSampleData {
    std::vector<double> x;
    std::vector<double> y;
    DomainTransform transform;
    std::vector<double> t; // pooled scaled values in [0,1]
    std::vector<int> r;    // pooled labels aligned with t

    int n() const { return static_cast<int>(x.size()); }
    int m() const { return static_cast<int>(y.size()); }
    int total() const { return static_cast<int>(t.size()); }
};

/// Builds TwoSampleData from raw samples; the transform is fit on the pooled
/// values with the given margin. Throws Error("empty-group") if either sample
/// is empty.
TwoSampleData make_two_sample(std::vector<double> x, std::vector<double> y,
                              double margin = 0.01);

/// Subsets the pooled sample by pooled indices, keeping the parent transform
/// (so held-out points of the complement still live in [0,1]).
TwoSampleData subset(const TwoSampleData& data, const std::vector<int>& pooled_indices);

/// Sample-size constants of the case-control design: lambda = m/(n+m) is the
/// sampling fraction of nominal cases, lambda_star the fraction of truly
/// diseased subjects in the pooled sample, and shift = logit(lambda_star) the
/// offset linking the complete- and observed-likelihood parameterizations.
struct ModelConstants {
    double lambda = 0.5;
    double lambda_star = 0.5;
    double shift = 0.0;
};

/// Throws Error("empty-group") when n or m < 1; rate validation as make_rates.
ModelConstants model_constants(int n, int m, const MixtureRates& rates);

/// log(a + b * exp(h)) for a, b >= 0 (not both zero), safe for |h| up to ~700.
double log_a_plus_b_exp(double a, double b, double h);

/// P(R=1 | selected, h): the posterior probability that an observation with
/// log density ratio value h carries the nominal case label. Monotone
/// increasing in h whenever pi1 > lambda_star.
double posterior_case_prob(double h_val, const ModelConstants& consts,
                           const MixtureRates& rates);

/// Observed log-likelihood of the log density ratio evaluated at the pooled
/// sample: h_vals[i] is h at the i-th pooled point, labels[i] its nominal
/// label. Always <= 0. Throws Error("length-mismatch").
double observed_loglik(const Eigen::VectorXd& h_vals, const std::vector<int>& labels,
                       const ModelConstants& consts, const MixtureRates& rates);

/// Penalized objective: observed log-likelihood at h(t) = b . phi(t) minus
/// nu * b' Phi2 b. Throws Error("negative-nu").
double penalized_objective(const Eigen::VectorXd& b, const TwoSampleData& data,
                           const SplineBasis& basis, const PenaltyMatrix& penalty,
                           const MixtureRates& rates, double nu);

/// Gradient of penalized_objective with respect to b.
Eigen::VectorXd penalized_gradient(const Eigen::VectorXd& b, const TwoSampleData& data,
                                   const SplineBasis& basis, const PenaltyMatrix& penalty,
                                   const MixtureRates& rates, double nu);

} // namespace rocem

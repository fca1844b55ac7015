#pragma once

#include "rocem/estimators.hpp"
#include "rocem/likelihood.hpp"
#include "rocem/solver.hpp"

#include <vector>

namespace rocem {

/// Right-continuous empirical CDF.
class StepCdf {
public:
    explicit StepCdf(std::vector<double> values);
    double operator()(double t) const;
    const std::vector<double>& sorted_values() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

/// Throws Error("empty-input") on an empty sample.
StepCdf empirical_cdf(const std::vector<double>& values);

/// Monotone rearrangement of function values sampled on an ordered grid:
/// sort ascending, then clip to [0,1].
std::vector<double> monotone_rearrange(std::vector<double> values_on_grid);

/// One point of the inversion identity: recovers (F0, F1) from the
/// label-conditional CDF values (F0*, F1*) under the known mixing rates.
std::pair<double, double> invert_cdf_point(double f0_star, double f1_star,
                                           const MixtureRates& rates);

/// Fully nonparametric baseline: plugs the group empirical CDFs into the
/// inversion identity on the pooled support, rearranges each estimate to be
/// monotone, and packages the result in the same CDF-pair shape the EM
/// estimator uses, so all downstream ROC machinery applies unchanged.
WeightedCdfPair np_inversion_cdfs(const TwoSampleData& data, const MixtureRates& rates);

/// Naive method: the EM fit run with pi0 = pi1 = 1, i.e. treating the
/// reference standard as a gold standard.
DensityRatioFit naive_fit(const TwoSampleData& data, const SplineBasis& basis, double nu,
                          const EmOptions& opts = {});

} // namespace rocem

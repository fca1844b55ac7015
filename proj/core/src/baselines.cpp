#include "rocem/baselines.hpp"

#include "rocem/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rocem {

StepCdf::StepCdf(std::vector<double> values) : sorted_(std::move(values)) {
    std::sort(sorted_.begin(), sorted_.end());
}

double StepCdf::operator()(double t) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(it - sorted_.begin()) / sorted_.size();
}

StepCdf empirical_cdf(const std::vector<double>& values) {
    if (values.empty()) throw Error("empty-input", "empirical CDF needs data");
    return StepCdf(values);
}

std::vector<double> monotone_rearrange(std::vector<double> values_on_grid) {
    std::sort(values_on_grid.begin(), values_on_grid.end());
    for (double& v : values_on_grid) v = std::clamp(v, 0.0, 1.0);
    return values_on_grid;
}

std::pair<double, double> invert_cdf_point(double f0_star, double f1_star,
                                           const MixtureRates& rates) {
    make_rates(rates.pi0, rates.pi1);
    const double denom = rates.pi0 + rates.pi1 - 1.0;
    const double f0 = (rates.pi1 * f0_star - (1.0 - rates.pi0) * f1_star) / denom;
    const double f1 = (rates.pi0 * f1_star - (1.0 - rates.pi1) * f0_star) / denom;
    return {f0, f1};
}

WeightedCdfPair np_inversion_cdfs(const TwoSampleData& data, const MixtureRates& rates) {
    make_rates(rates.pi0, rates.pi1);

    std::vector<double> scaled_x(data.t.begin(), data.t.begin() + data.n());
    std::vector<double> scaled_y(data.t.begin() + data.n(), data.t.end());
    const StepCdf ecdf0 = empirical_cdf(scaled_x);
    const StepCdf ecdf1 = empirical_cdf(scaled_y);

    std::vector<double> support = data.t;
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    std::vector<double> f0_vals(support.size()), f1_vals(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto [f0, f1] = invert_cdf_point(ecdf0(support[i]), ecdf1(support[i]), rates);
        f0_vals[i] = f0;
        f1_vals[i] = f1;
    }
    f0_vals = monotone_rearrange(std::move(f0_vals));
    f1_vals = monotone_rearrange(std::move(f1_vals));
    return cdfs_from_step_values(support, f0_vals, f1_vals);
}

DensityRatioFit naive_fit(const TwoSampleData& data, const SplineBasis& basis, double nu,
                          const EmOptions& opts) {
    return fit_em(data, basis, MixtureRates{1.0, 1.0}, nu, opts);
}

} // namespace rocem

#pragma once

#include "rocem/basis.hpp"
#include "rocem/likelihood.hpp"
#include "rocem/solver.hpp"

#include <cstdint>
#include <vector>

namespace rocem {

/// Cross-validation plan for selecting the roughness penalty.
struct CvPlan {
    int n_folds = 5;
    std::vector<double> nu_grid; // empty -> default_nu_grid()
    std::uint64_t seed = 0;
    unsigned n_threads = 1; // worker budget for the (fold x nu) job grid
};

/// Log-spaced candidate grid, default 15 points in [1e-4, 1e2].
std::vector<double> default_nu_grid(double lo = 1e-4, double hi = 1e2, int points = 15);

/// Fold id in [0, n_folds) per observation, stratified by label so class
/// proportions are preserved up to one observation per fold.
std::vector<int> stratified_folds(const std::vector<int>& labels, int n_folds,
                                  std::uint64_t seed);

struct CvResult {
    double nu_star = 0.0;
    std::vector<double> nu_grid;
    std::vector<double> scores; // summed held-out log-likelihood per grid point
    int n_failed_fits = 0;
};

/// Index of the best grid point; ties break toward the larger (smoother) nu.
std::size_t select_nu_index(const std::vector<double>& scores);

/// Selects nu by K-fold cross-validation: each candidate is scored by the sum
/// over folds of the observed log-likelihood of the held-out fold, evaluated
/// with the training fit's h and the training split's sample-size constants.
/// Throws Error("insufficient-data") when a label class has fewer observations
/// than folds and Error("all-fits-failed") when no candidate could be scored.
CvResult cv_select_nu(const TwoSampleData& data, const SplineBasis& basis,
                      const MixtureRates& rates, const CvPlan& plan,
                      const EmOptions& opts = {});

/// Same, with a caller-supplied fold assignment (fold ids in [0, max+1)).
CvResult cv_select_nu_with_folds(const TwoSampleData& data, const SplineBasis& basis,
                                 const MixtureRates& rates, const std::vector<int>& fold_ids,
                                 const std::vector<double>& nu_grid, const EmOptions& opts,
                                 unsigned n_threads);

} // namespace rocem

#pragma once

#include "rocem/basis.hpp"
#include "rocem/likelihood.hpp"

#include <Eigen/Core>

#include <vector>

namespace rocem {

struct EmOptions {
    int max_em_iters = 500;
    double em_tol = 1e-6; // relative change of the penalized objective
    int irls_max_iters = 100;
    double irls_tol = 1e-8;
    int step_halving_max = 30;
};

/// Basis values at a fixed set of sample points, stored in windowed form
/// (each row has degree+1 possibly-nonzero entries). Built once per fit and
/// reused across iterations.
class BasisDesign {
public:
    BasisDesign(const SplineBasis& basis, const std::vector<double>& t);

    int rows() const { return static_cast<int>(first_.size()); }
    int cols() const { return n_cols_; }
    int window() const { return static_cast<int>(vals_.cols()); }

    /// eta = X b
    Eigen::VectorXd eta(const Eigen::VectorXd& coeffs) const;
    /// X' v
    Eigen::VectorXd transpose_times(const Eigen::VectorXd& v) const;
    /// out = X' diag(w) X  (out is zeroed first)
    void weighted_gram(const Eigen::VectorXd& w, Eigen::MatrixXd& out) const;

private:
    int n_cols_ = 0;
    std::vector<int> first_;
    Eigen::MatrixXd vals_; // rows x (degree+1)
};

/// Result of one penalized-logistic M-step solve.
struct MStepResult {
    Eigen::VectorXd coeffs;
    int iters = 0;
    bool converged = false;
    bool ridged = false; // a near-singular system was stabilized with a 1e-10 diagonal jitter
};

/// Fitted log density ratio h(t) = coefficients . phi(t) with its model
/// constants and EM diagnostics. The objective trace records the penalized
/// observed objective after every EM iteration and is non-decreasing.
struct DensityRatioFit {
    Eigen::VectorXd coefficients;
    SplineBasis basis;
    ModelConstants consts;
    MixtureRates rates;
    double nu = 0.0;
    int n_em_iters = 0;
    double final_objective = 0.0;
    std::vector<double> objective_trace;
    bool converged = false;
    bool ridged = false;

    double h_at(double t_unit) const { return basis.value_of(coefficients, t_unit); }
    Eigen::VectorXd h_values(const std::vector<double>& t_unit) const;
    /// Estimated roughness \int_0^1 h''(t)^2 dt of the fitted log density ratio.
    double roughness() const;
};

/// E-step responsibilities: the conditional probability that each observation
/// is truly diseased, given its label and the current h value.
Eigen::VectorXd e_step(const Eigen::VectorXd& h_vals, const std::vector<int>& labels,
                       const MixtureRates& rates);

/// M-step: maximizes the penalized pseudo-binomial objective
///   sum_i [g_i eta_i - log(1 + exp(eta_i))] - nu b' Phi2 b,   eta = X b,
/// by damped Newton (IRLS) with step halving, warm-started at `init`.
/// Throws Error("singular-system") if the Newton system stays unsolvable
/// after the diagonal jitter.
MStepResult m_step(const Eigen::VectorXd& responsibilities, const BasisDesign& design,
                   const PenaltyMatrix& penalty, double nu, Eigen::VectorXd init,
                   const EmOptions& opts = {});

/// Full EM fit of the penalized sieve log density ratio. Non-convergence
/// within the iteration budget is flagged, not fatal.
DensityRatioFit fit_em(const TwoSampleData& data, const SplineBasis& basis,
                       const MixtureRates& rates, double nu, const EmOptions& opts = {});

} // namespace rocem

#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace rocem {

/// Affine map from a raw biomarker range onto the unit interval. The working
/// range is extended by margin * (hi - lo) on each side so that no data point
/// sits exactly on a boundary knot.
struct DomainTransform {
    double lo = 0.0;
    double hi = 1.0;
    double margin = 0.0;

    double lo_ext() const { return lo - margin * (hi - lo); }
    double hi_ext() const { return hi + margin * (hi - lo); }

    double to_unit(double raw) const { return (raw - lo_ext()) / (hi_ext() - lo_ext()); }
    double from_unit(double unit) const { return lo_ext() + unit * (hi_ext() - lo_ext()); }
};

/// Fits a DomainTransform to raw values and returns the values mapped onto
/// [0,1] (clamped against representation round-off). Requires at least two
/// distinct values; throws Error("degenerate-data") otherwise.
std::pair<DomainTransform, std::vector<double>>
fit_transform(const std::vector<double>& raw_values, double margin);

/// Normalized (clamped, open-uniform) B-spline basis on [0,1].
///
/// `degree` is the polynomial degree of the pieces and `size` the number of
/// basis functions K. Breakpoints are the K - degree + 1 equally spaced values
/// 0 = tau_1 < ... < tau_{K-degree+1} = 1; boundary knots are repeated
/// degree + 1 times. The functions are nonnegative, sum to one everywhere, and
/// at most degree + 1 of them are nonzero at any t. Immutable after
/// construction and safe to share across threads.
class SplineBasis {
public:
    SplineBasis() = default;

    int degree() const { return degree_; }
    int size() const { return n_basis_; }

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& knot_vector() const { return knots_; }

    /// All K basis function values at t in [0,1]. Throws Error("out-of-domain")
    /// for t outside the unit interval.
    Eigen::VectorXd eval(double t) const;

    /// The degree+1 possibly-nonzero values at t, written into `vals`
    /// (resized). Returns the index of the first nonzero function.
    int eval_nonzero(double t, Eigen::VectorXd& vals) const;

    /// Values and derivatives up to `order` of the nonzero functions at t.
    /// `ders` is resized to (order+1) x (degree+1); row k holds the k-th
    /// derivative. Returns the index of the first nonzero function.
    int derivs_nonzero(double t, int order, Eigen::MatrixXd& ders) const;

    /// The spline value coeffs . phi(t).
    double value_of(const Eigen::VectorXd& coeffs, double t) const;

private:
    friend SplineBasis make_basis(int n_basis, int degree);

    int find_span(double t) const;

    int degree_ = 0;
    int n_basis_ = 0;
    std::vector<double> breakpoints_;
    std::vector<double> knots_; // full clamped knot vector, length K + degree + 1
};

/// Builds the basis with K = n_basis functions of the given polynomial degree.
/// Throws Error("invalid-dimension") unless degree >= 1 and n_basis >= degree + 1.
SplineBasis make_basis(int n_basis, int degree);

/// All K basis values at t; free-function form of SplineBasis::eval.
Eigen::VectorXd eval_basis(const SplineBasis& basis, double t);

/// K x K roughness penalty with (j,k) entry  \int_0^1 phi_j''(t) phi_k''(t) dt,
/// computed exactly by per-interval Gauss-Legendre quadrature. Symmetric and
/// positive semi-definite; for degree >= 2 its null space contains every
/// coefficient vector representing an affine function. Throws
/// Error("unsupported-degree") when degree < 2.
using PenaltyMatrix = Eigen::MatrixXd;
PenaltyMatrix penalty_matrix(const SplineBasis& basis);

/// Greville abscissae: coefficients g with g . phi(t) = t on [0,1].
Eigen::VectorXd greville_abscissae(const SplineBasis& basis);

} // namespace rocem

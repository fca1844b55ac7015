#include "rocem/basis.hpp"

#include "rocem/errors.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>

namespace rocem {

namespace {

// Gauss-Legendre nodes and weights on [-1,1]. Nodes are the Legendre zeros;
// weights follow from w = 2 / ((1-x^2) P_n'(x)^2).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.clear();
    weights.clear();
    const std::vector<double> pos = boost::math::legendre_p_zeros<double>(n);
    for (double x : pos) {
        const double dp = boost::math::legendre_p_prime(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        if (x == 0.0) {
            nodes.push_back(0.0);
            weights.push_back(w);
        } else {
            nodes.push_back(-x);
            weights.push_back(w);
            nodes.push_back(x);
            weights.push_back(w);
        }
    }
}

} // namespace

std::pair<DomainTransform, std::vector<double>>
fit_transform(const std::vector<double>& raw_values, double margin) {
    if (margin < 0.0) throw Error("invalid-margin", "margin must be nonnegative");
    if (raw_values.size() < 2)
        throw Error("degenerate-data", "need at least 2 distinct values");
    const auto [lo_it, hi_it] = std::minmax_element(raw_values.begin(), raw_values.end());
    if (!(*hi_it > *lo_it))
        throw Error("degenerate-data", "all values are equal; range is degenerate");

    DomainTransform tf{*lo_it, *hi_it, margin};
    std::vector<double> scaled(raw_values.size());
    for (std::size_t i = 0; i < raw_values.size(); ++i)
        scaled[i] = std::clamp(tf.to_unit(raw_values[i]), 0.0, 1.0);
    return {tf, std::move(scaled)};
}

SplineBasis make_basis(int n_basis, int degree) {
    if (degree < 1)
        throw Error("invalid-dimension", "spline degree must be at least 1");
    if (n_basis < degree + 1)
        throw Error("invalid-dimension",
                    "need at least degree + 1 = " + std::to_string(degree + 1) +
                        " basis functions, got " + std::to_string(n_basis));

    SplineBasis b;
    b.degree_ = degree;
    b.n_basis_ = n_basis;

    const int n_break = n_basis - degree + 1;
    b.breakpoints_.resize(n_break);
    for (int j = 0; j < n_break; ++j)
        b.breakpoints_[j] = static_cast<double>(j) / (n_break - 1);
    b.breakpoints_.front() = 0.0;
    b.breakpoints_.back() = 1.0;

    b.knots_.reserve(n_basis + degree + 1);
    b.knots_.insert(b.knots_.end(), degree, 0.0);
    b.knots_.insert(b.knots_.end(), b.breakpoints_.begin(), b.breakpoints_.end());
    b.knots_.insert(b.knots_.end(), degree, 1.0);
    return b;
}

int SplineBasis::find_span(double t) const {
    if (t >= 1.0) return n_basis_ - 1;
    int span = static_cast<int>(
        std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin() - 1);
    return std::clamp(span, degree_, n_basis_ - 1);
}

int SplineBasis::eval_nonzero(double t, Eigen::VectorXd& vals) const {
    if (!(t >= 0.0 && t <= 1.0))
        throw Error("out-of-domain", "basis evaluation point outside [0,1]");
    const int p = degree_;
    const auto& U = knots_;
    const int span = find_span(t);

    vals.resize(p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    vals[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = t - U[span + 1 - j];
        right[j] = U[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = vals[r] / (right[r + 1] + left[j - r]);
            vals[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        vals[j] = saved;
    }
    return span - p;
}

Eigen::VectorXd SplineBasis::eval(double t) const {
    Eigen::VectorXd window;
    const int first = eval_nonzero(t, window);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_basis_);
    out.segment(first, degree_ + 1) = window;
    return out;
}

int SplineBasis::derivs_nonzero(double t, int order, Eigen::MatrixXd& ders) const {
    if (!(t >= 0.0 && t <= 1.0))
        throw Error("out-of-domain", "basis evaluation point outside [0,1]");
    const int p = degree_;
    const int n = std::min(order, p); // derivatives beyond p vanish
    const auto& U = knots_;
    const int span = find_span(t);

    // Triangular table of values and knot differences (de Boor).
    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = t - U[span + 1 - j];
        right[j] = U[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }

    ders.setZero(order + 1, p + 1);
    for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= n; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            ders(k, r) = d;
            std::swap(s1, s2);
        }
    }

    double factor = p;
    for (int k = 1; k <= n; ++k) {
        for (int j = 0; j <= p; ++j) ders(k, j) *= factor;
        factor *= (p - k);
    }
    return span - p;
}

double SplineBasis::value_of(const Eigen::VectorXd& coeffs, double t) const {
    Eigen::VectorXd window;
    const int first = eval_nonzero(t, window);
    return coeffs.segment(first, degree_ + 1).dot(window);
}

Eigen::VectorXd eval_basis(const SplineBasis& basis, double t) { return basis.eval(t); }

PenaltyMatrix penalty_matrix(const SplineBasis& basis) {
    const int d = basis.degree();
    if (d < 2)
        throw Error("unsupported-degree",
                    "second-derivative penalty requires degree >= 2");
    const int K = basis.size();

    // Integrand per knot interval is a polynomial of degree 2(d-2).
    const int n_nodes = (2 * (d - 2) + 1) / 2 + 2;
    std::vector<double> nodes, weights;
    gauss_legendre(n_nodes, nodes, weights);

    Eigen::MatrixXd phi2 = Eigen::MatrixXd::Zero(K, K);
    Eigen::MatrixXd ders;
    const auto& brk = basis.breakpoints();
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double a = brk[i], b = brk[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        if (!(half > 0.0)) continue;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const double t = mid + half * nodes[q];
            const double w = half * weights[q];
            const int first = basis.derivs_nonzero(t, 2, ders);
            for (int r = 0; r <= d; ++r) {
                const double dr = ders(2, r);
                if (dr == 0.0) continue;
                for (int c = 0; c <= d; ++c)
                    phi2(first + r, first + c) += w * dr * ders(2, c);
            }
        }
    }
    return phi2;
}

Eigen::VectorXd greville_abscissae(const SplineBasis& basis) {
    const int K = basis.size();
    const int d = basis.degree();
    const auto& U = basis.knot_vector();
    Eigen::VectorXd g(K);
    for (int k = 0; k < K; ++k) {
        double sum = 0.0;
        for (int j = 1; j <= d; ++j) sum += U[k + j];
        g[k] = sum / d;
    }
    return g;
}

} // namespace rocem

#include "rocem/solver.hpp"

#include "rocem/errors.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <utility>

namespace rocem {

namespace {

double log1p_exp(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

BasisDesign::BasisDesign(const SplineBasis& basis, const std::vector<double>& t)
    : n_cols_(basis.size()), first_(t.size()), vals_(t.size(), basis.degree() + 1) {
    Eigen::VectorXd window;
    for (std::size_t i = 0; i < t.size(); ++i) {
        first_[i] = basis.eval_nonzero(t[i], window);
        vals_.row(i) = window.transpose();
    }
}

Eigen::VectorXd BasisDesign::eta(const Eigen::VectorXd& coeffs) const {
    Eigen::VectorXd out(rows());
    const int w = window();
    for (int i = 0; i < rows(); ++i)
        out[i] = vals_.row(i).dot(coeffs.segment(first_[i], w).transpose());
    return out;
}

Eigen::VectorXd BasisDesign::transpose_times(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_cols_);
    const int w = window();
    for (int i = 0; i < rows(); ++i)
        out.segment(first_[i], w) += v[i] * vals_.row(i).transpose();
    return out;
}

void BasisDesign::weighted_gram(const Eigen::VectorXd& w, Eigen::MatrixXd& out) const {
    out.setZero(n_cols_, n_cols_);
    const int width = window();
    for (int i = 0; i < rows(); ++i) {
        const int f = first_[i];
        for (int a = 0; a < width; ++a) {
            const double wa = w[i] * vals_(i, a);
            if (wa == 0.0) continue;
            for (int b = 0; b < width; ++b) out(f + a, f + b) += wa * vals_(i, b);
        }
    }
}

Eigen::VectorXd e_step(const Eigen::VectorXd& h_vals, const std::vector<int>& labels,
                       const MixtureRates& rates) {
    if (h_vals.size() != static_cast<Eigen::Index>(labels.size()))
        throw Error("length-mismatch", "h values and labels differ in length");

    // logit offsets of the two closed-form posteriors
    const double off0 =
        rates.pi0 < 1.0 ? std::log((1.0 - rates.pi0) / rates.pi0) : 0.0;
    const double off1 =
        rates.pi1 < 1.0 ? std::log(rates.pi1 / (1.0 - rates.pi1)) : 0.0;

    Eigen::VectorXd g(h_vals.size());
    for (Eigen::Index i = 0; i < h_vals.size(); ++i) {
        if (labels[i] == 0)
            g[i] = rates.pi0 < 1.0 ? logistic(h_vals[i] + off0) : 0.0;
        else
            g[i] = rates.pi1 < 1.0 ? logistic(h_vals[i] + off1) : 1.0;
    }
    return g;
}

namespace {

double mstep_objective(const Eigen::VectorXd& g, const BasisDesign& X,
                       const PenaltyMatrix& penalty, double nu, const Eigen::VectorXd& b,
                       Eigen::VectorXd& eta_buf) {
    eta_buf = X.eta(b);
    double value = 0.0;
    for (Eigen::Index i = 0; i < eta_buf.size(); ++i)
        value += g[i] * eta_buf[i] - log1p_exp(eta_buf[i]);
    return value - nu * b.dot(penalty * b);
}

} // namespace

MStepResult m_step(const Eigen::VectorXd& responsibilities, const BasisDesign& design,
                   const PenaltyMatrix& penalty, double nu, Eigen::VectorXd init,
                   const EmOptions& opts) {
    if (nu < 0.0) throw Error("negative-nu", "penalty parameter must be nonnegative");
    const int K = design.cols();
    const int N = design.rows();

    // Responsibilities pinned at 0/1 are nudged inward for the weight
    // computation only; callers keep the unclamped values.
    Eigen::VectorXd g = responsibilities.cwiseMax(1e-12).cwiseMin(1.0 - 1e-12);

    MStepResult res;
    res.coeffs = std::move(init);
    if (res.coeffs.size() != K)
        throw Error("length-mismatch", "initial coefficient vector has wrong length");

    Eigen::VectorXd eta(N), mu(N), w(N), grad(K), delta(K), candidate(K), eta_buf(N);
    Eigen::MatrixXd hess(K, K);
    double f = mstep_objective(g, design, penalty, nu, res.coeffs, eta_buf);

    for (int iter = 1; iter <= opts.irls_max_iters; ++iter) {
        res.iters = iter;
        eta = design.eta(res.coeffs);
        for (int i = 0; i < N; ++i) {
            mu[i] = logistic(eta[i]);
            w[i] = mu[i] * (1.0 - mu[i]);
        }
        grad = design.transpose_times(g - mu);
        grad.noalias() -= 2.0 * nu * (penalty * res.coeffs);

        design.weighted_gram(w, hess);
        hess.noalias() += 2.0 * nu * penalty;

        Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
        delta = ldlt.solve(grad);
        bool bad = ldlt.info() != Eigen::Success || !delta.allFinite() ||
                   (hess * delta - grad).norm() > 1e-6 * (grad.norm() + 1.0);
        if (bad) {
            hess.diagonal().array() += 1e-10;
            Eigen::LDLT<Eigen::MatrixXd> retry(hess);
            delta = retry.solve(grad);
            res.ridged = true;
            if (retry.info() != Eigen::Success || !delta.allFinite())
                throw Error("singular-system",
                            "penalized IRLS system is singular even after ridge jitter");
        }

        // step halving until the penalized objective does not decrease
        double alpha = 1.0;
        double f_new = f;
        bool accepted = false;
        for (int half = 0; half <= opts.step_halving_max; ++half) {
            candidate = res.coeffs + alpha * delta;
            f_new = mstep_objective(g, design, penalty, nu, candidate, eta_buf);
            if (f_new >= f - 1e-12 * (std::abs(f) + 1.0)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break; // stalled; keep the last iterate

        const double step_size = (alpha * delta).cwiseAbs().maxCoeff();
        res.coeffs = candidate;
        const double improvement = f_new - f;
        f = f_new;
        if (step_size <= opts.irls_tol * (1.0 + res.coeffs.cwiseAbs().maxCoeff()) ||
            std::abs(improvement) <= opts.irls_tol * (std::abs(f) + 1.0)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

Eigen::VectorXd DensityRatioFit::h_values(const std::vector<double>& t_unit) const {
    Eigen::VectorXd out(t_unit.size());
    for (std::size_t i = 0; i < t_unit.size(); ++i) out[i] = h_at(t_unit[i]);
    return out;
}

double DensityRatioFit::roughness() const {
    const PenaltyMatrix phi2 = penalty_matrix(basis);
    return coefficients.dot(phi2 * coefficients);
}

DensityRatioFit fit_em(const TwoSampleData& data, const SplineBasis& basis,
                       const MixtureRates& rates, double nu, const EmOptions& opts) {
    if (nu < 0.0) throw Error("negative-nu", "penalty parameter must be nonnegative");
    if (opts.max_em_iters < 1 || opts.em_tol <= 0.0 || opts.irls_max_iters < 1 ||
        opts.irls_tol <= 0.0 || opts.step_halving_max < 1)
        throw Error("invalid-options", "EM options must all be positive");
    make_rates(rates.pi0, rates.pi1);

    DensityRatioFit fit;
    fit.basis = basis;
    fit.rates = rates;
    fit.nu = nu;
    fit.consts = model_constants(data.n(), data.m(), rates);

    const BasisDesign design(basis, data.t);
    const PenaltyMatrix penalty = penalty_matrix(basis);
    const double c = fit.consts.shift;
    const int N = data.total();

    // Initial responsibilities from the label-conditional means of G.
    Eigen::VectorXd g(N);
    for (int i = 0; i < N; ++i)
        g[i] = data.r[i] == 0 ? 1.0 - rates.pi0 : rates.pi1;

    Eigen::VectorXd b_tilde = Eigen::VectorXd::Zero(basis.size());
    Eigen::VectorXd h_vals(N);
    double prev_q = 0.0;

    for (int s = 1; s <= opts.max_em_iters; ++s) {
        const MStepResult ms = m_step(g, design, penalty, nu, b_tilde, opts);
        b_tilde = ms.coeffs;
        fit.ridged = fit.ridged || ms.ridged;
        fit.n_em_iters = s;

        // Shift back to the observed-likelihood parameterization. The basis
        // sums to one, so subtracting c from every coefficient subtracts the
        // constant c from the fitted function.
        h_vals = design.eta(b_tilde).array() - c;

        const double q = observed_loglik(h_vals, data.r, fit.consts, rates) -
                         nu * b_tilde.dot(penalty * b_tilde);
        fit.objective_trace.push_back(q);
        if (s > 1 && std::abs(q - prev_q) <= opts.em_tol * (std::abs(prev_q) + 1e-12)) {
            fit.converged = true;
            prev_q = q;
            break;
        }
        prev_q = q;

        g = e_step(h_vals, data.r, rates);
    }

    fit.coefficients = b_tilde.array() - c;
    fit.final_objective = prev_q;
    return fit;
}

} // namespace rocem

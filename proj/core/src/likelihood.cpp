#include "rocem/likelihood.hpp"

#include "rocem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rocem {

MixtureRates make_rates(double pi0, double pi1) {
    if (!(pi0 > 0.0 && pi0 <= 1.0) || !(pi1 > 0.0 && pi1 <= 1.0))
        throw Error("invalid-rate", "pi0 and pi1 must lie in (0,1]");
    if (!(pi0 + pi1 > 1.0))
        throw Error("identifiability-violation",
                    "pi0 + pi1 must exceed 1 for the mixture to be identifiable");
    return MixtureRates{pi0, pi1};
}

TwoSampleData make_two_sample(std::vector<double> x, std::vector<double> y,
                              double margin) {
    if (x.empty() || y.empty())
        throw Error("empty-group", "both the R=0 and R=1 samples must be nonempty");
    std::vector<double> pooled;
    pooled.reserve(x.size() + y.size());
    pooled.insert(pooled.end(), x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());

    auto [tf, scaled] = fit_transform(pooled, margin);

    TwoSampleData d;
    d.x = std::move(x);
    d.y = std::move(y);
    d.transform = tf;
    d.t = std::move(scaled);
    d.r.assign(d.t.size(), 0);
    std::fill(d.r.begin() + d.x.size(), d.r.end(), 1);
    return d;
}

TwoSampleData subset(const TwoSampleData& data, const std::vector<int>& pooled_indices) {
    TwoSampleData out;
    out.transform = data.transform;
    // Keep the x-then-y pooled convention of the parent.
    for (int pass = 0; pass < 2; ++pass) {
        for (int i : pooled_indices) {
            if (data.r[i] != pass) continue;
            out.t.push_back(data.t[i]);
            out.r.push_back(pass);
            if (pass == 0)
                out.x.push_back(data.x[i]);
            else
                out.y.push_back(data.y[i - data.n()]);
        }
    }
    if (out.x.empty() || out.y.empty())
        throw Error("empty-group", "subset leaves one label class empty");
    return out;
}

ModelConstants model_constants(int n, int m, const MixtureRates& rates) {
    if (n < 1 || m < 1)
        throw Error("empty-group", "both samples need at least one observation");
    make_rates(rates.pi0, rates.pi1);

    ModelConstants c;
    const double total = n + m;
    c.lambda = m / total;
    c.lambda_star = (n * (1.0 - rates.pi0) + m * rates.pi1) / total;
    c.shift = std::log(c.lambda_star / (1.0 - c.lambda_star));
    return c;
}

double log_a_plus_b_exp(double a, double b, double h) {
    if (b == 0.0) return std::log(a);
    const double lb = std::log(b) + h;
    if (a == 0.0) return lb;
    const double la = std::log(a);
    const double hi = std::max(la, lb);
    return hi + std::log1p(std::exp(std::min(la, lb) - hi));
}

namespace {

// d/dh log(a + b e^h) = b e^h / (a + b e^h), evaluated without overflow.
double exp_share(double a, double b, double h) {
    if (b == 0.0) return 0.0;
    if (a == 0.0) return 1.0;
    const double z = std::log(b) - std::log(a) + h;
    if (z > 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

double posterior_case_prob(double h_val, const ModelConstants& consts,
                           const MixtureRates& rates) {
    const double log_num =
        log_a_plus_b_exp((1.0 - rates.pi1) * consts.lambda, rates.pi1 * consts.lambda, h_val);
    const double log_den =
        log_a_plus_b_exp(1.0 - consts.lambda_star, consts.lambda_star, h_val);
    return std::clamp(std::exp(log_num - log_den), 0.0, 1.0);
}

double observed_loglik(const Eigen::VectorXd& h_vals, const std::vector<int>& labels,
                       const ModelConstants& consts, const MixtureRates& rates) {
    if (h_vals.size() != static_cast<Eigen::Index>(labels.size()))
        throw Error("length-mismatch", "h values and labels differ in length");

    const double lam = consts.lambda;
    const double ls = consts.lambda_star;
    double total = 0.0;
    for (Eigen::Index i = 0; i < h_vals.size(); ++i) {
        const double h = h_vals[i];
        const double log_den = log_a_plus_b_exp(1.0 - ls, ls, h);
        if (labels[i] == 1)
            total += log_a_plus_b_exp((1.0 - rates.pi1) * lam, rates.pi1 * lam, h) - log_den;
        else
            total += log_a_plus_b_exp(rates.pi0 * (1.0 - lam), (1.0 - rates.pi0) * (1.0 - lam), h) -
                     log_den;
    }
    return total;
}

double penalized_objective(const Eigen::VectorXd& b, const TwoSampleData& data,
                           const SplineBasis& basis, const PenaltyMatrix& penalty,
                           const MixtureRates& rates, double nu) {
    if (nu < 0.0) throw Error("negative-nu", "penalty parameter must be nonnegative");
    const ModelConstants consts = model_constants(data.n(), data.m(), rates);

    Eigen::VectorXd h(data.total());
    for (int i = 0; i < data.total(); ++i) h[i] = basis.value_of(b, data.t[i]);
    return observed_loglik(h, data.r, consts, rates) - nu * b.dot(penalty * b);
}

Eigen::VectorXd penalized_gradient(const Eigen::VectorXd& b, const TwoSampleData& data,
                                   const SplineBasis& basis, const PenaltyMatrix& penalty,
                                   const MixtureRates& rates, double nu) {
    if (nu < 0.0) throw Error("negative-nu", "penalty parameter must be nonnegative");
    const ModelConstants consts = model_constants(data.n(), data.m(), rates);
    const double lam = consts.lambda;
    const double ls = consts.lambda_star;

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(basis.size());
    Eigen::VectorXd window;
    for (int i = 0; i < data.total(); ++i) {
        const int first = basis.eval_nonzero(data.t[i], window);
        const double h = window.dot(b.segment(first, basis.degree() + 1));
        double dnum;
        if (data.r[i] == 1)
            dnum = exp_share((1.0 - rates.pi1) * lam, rates.pi1 * lam, h);
        else
            dnum = exp_share(rates.pi0 * (1.0 - lam), (1.0 - rates.pi0) * (1.0 - lam), h);
        const double dden = exp_share(1.0 - ls, ls, h);
        grad.segment(first, basis.degree() + 1) += (dnum - dden) * window;
    }
    grad.noalias() -= 2.0 * nu * (penalty * b);
    return grad;
}

} // namespace rocem

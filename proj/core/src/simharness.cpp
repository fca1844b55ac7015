#include "rocem/simharness.hpp"

#include "rocem/baselines.hpp"
#include "rocem/errors.hpp"
#include "rocem/estimators.hpp"
#include "rocem/parallel.hpp"
#include "rocem/rng.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rocem {

namespace {

const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);

double norm_cdf(double x) { return boost::math::cdf(kStdNormal, x); }
double norm_quantile(double p) { return boost::math::quantile(kStdNormal, p); }

} // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Em: return "EM";
        case Method::Np: return "NP";
        case Method::Naive: return "naive";
    }
    return "?";
}

MixtureRates bayes_rates(double pi, double se, double sp) {
    if (!(pi > 0.0 && pi <= 1.0) || !(se > 0.0 && se <= 1.0) || !(sp > 0.0 && sp <= 1.0))
        throw Error("invalid-rate", "prevalence, se and sp must lie in (0,1]");
    const double pi1 = se * pi / (se * pi + (1.0 - sp) * (1.0 - pi));
    const double pi0 = sp * (1.0 - pi) / (sp * (1.0 - pi) + (1.0 - se) * pi);
    return make_rates(pi0, pi1); // throws identifiability-violation if pi0+pi1 <= 1
}

UnivariateSample gen_univariate_normal(const Scenario& sc, std::mt19937_64& rng) {
    const MixtureRates rates = bayes_rates(sc.prevalence, sc.se, sc.sp);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    UnivariateSample out;
    std::vector<double> x(sc.n), y(sc.m);
    out.g.reserve(sc.n + sc.m);
    for (int i = 0; i < sc.n; ++i) {
        const int g = unif(rng) < rates.pi0 ? 0 : 1;
        x[i] = normal(rng) + (g == 1 ? 1.0 : 0.0);
        out.g.push_back(g);
    }
    for (int j = 0; j < sc.m; ++j) {
        const int g = unif(rng) < rates.pi1 ? 1 : 0;
        y[j] = normal(rng) + (g == 1 ? 1.0 : 0.0);
        out.g.push_back(g);
    }
    out.data = make_two_sample(std::move(x), std::move(y));
    return out;
}

BivariateSample gen_bivariate_normal(const Scenario& sc, std::mt19937_64& rng) {
    const MixtureRates rates = bayes_rates(sc.prevalence, sc.se, sc.sp);
    if (!(sc.rho > -1.0 && sc.rho < 1.0))
        throw Error("invalid-rate", "correlation must lie in (-1,1)");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double rho_c = std::sqrt(1.0 - sc.rho * sc.rho);

    // component means per marker; diseased group takes the larger values
    const double mu1_dis = sc.diseased_high ? 2.0 : 0.0;
    const double mu1_hea = sc.diseased_high ? 0.0 : 2.0;
    const double mu2_dis = sc.diseased_high ? 1.0 : 0.0;
    const double mu2_hea = sc.diseased_high ? 0.0 : 1.0;

    BivariateSample out;
    std::vector<double> x1(sc.n), x2(sc.n), y1(sc.m), y2(sc.m);
    out.g.reserve(sc.n + sc.m);
    auto draw = [&](int g, double& v1, double& v2) {
        const double z1 = normal(rng);
        const double z2 = sc.rho * z1 + rho_c * normal(rng);
        v1 = z1 + (g == 1 ? mu1_dis : mu1_hea);
        v2 = z2 + (g == 1 ? mu2_dis : mu2_hea);
    };
    for (int i = 0; i < sc.n; ++i) {
        const int g = unif(rng) < rates.pi0 ? 0 : 1;
        draw(g, x1[i], x2[i]);
        out.g.push_back(g);
    }
    for (int j = 0; j < sc.m; ++j) {
        const int g = unif(rng) < rates.pi1 ? 1 : 0;
        draw(g, y1[j], y2[j]);
        out.g.push_back(g);
    }
    out.marker1 = make_two_sample(std::move(x1), std::move(y1));
    out.marker2 = make_two_sample(std::move(x2), std::move(y2));
    return out;
}

TargetValues binormal_targets(double mu0, double mu1, double s0, double s1, double* c0) {
    if (!(s0 >= 0.0 && s0 < s1 && s1 <= 1.0))
        throw Error("bad-interval", "partial AUC needs 0 <= s0 < s1 <= 1");
    const double delta = mu1 - mu0;

    TargetValues tv;
    tv.auc = norm_cdf(delta / std::sqrt(2.0));
    auto roc = [&](double s) { return norm_cdf(norm_quantile(s) + delta); };
    tv.roc02 = roc(0.2);

    // Youden: maximize F0(t) - F1(t). With equal means the gap is identically
    // zero; otherwise ternary-search the smooth unimodal gap.
    auto gap = [&](double t) { return norm_cdf(t - mu0) - norm_cdf(t - mu1); };
    if (delta == 0.0) {
        tv.youden = 0.0;
        if (c0) *c0 = mu0;
    } else {
        double lo = std::min(mu0, mu1) - 10.0, hi = std::max(mu0, mu1) + 10.0;
        for (int it = 0; it < 200; ++it) {
            const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
            if (gap(a) < gap(b))
                lo = a;
            else
                hi = b;
        }
        const double cut = 0.5 * (lo + hi);
        tv.youden = gap(cut);
        if (c0) *c0 = cut;
    }

    double err = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        roc, s0, s1, 15, 1e-10, &err);
    tv.pauc = integral / (s1 - s0);
    return tv;
}

TrueTargets true_targets(const Scenario& sc) {
    TrueTargets t;
    switch (sc.dgp) {
        case Dgp::UnivariateNormal: {
            // healthy N(0,1) vs diseased N(1,1); the orientation flag only
            // affects the bivariate design
            t.marker1 = binormal_targets(0.0, 1.0, sc.s0, sc.s1, &t.c0_marker1);
            t.marker2 = t.marker1;
            t.delta = TargetValues{};
            return t;
        }
        case Dgp::BivariateNormal: {
            t.marker1 = binormal_targets(sc.diseased_high ? 0.0 : 2.0,
                                         sc.diseased_high ? 2.0 : 0.0, sc.s0, sc.s1,
                                         &t.c0_marker1);
            t.marker2 = binormal_targets(sc.diseased_high ? 0.0 : 1.0,
                                         sc.diseased_high ? 1.0 : 0.0, sc.s0, sc.s1,
                                         &t.c0_marker2);
            t.delta.roc02 = t.marker1.roc02 - t.marker2.roc02;
            t.delta.auc = t.marker1.auc - t.marker2.auc;
            t.delta.youden = t.marker1.youden - t.marker2.youden;
            t.delta.pauc = t.marker1.pauc - t.marker2.pauc;
            return t;
        }
    }
    throw Error("unsupported-dgp", "unknown data-generating process");
}

namespace {

TargetValues evaluate_method(Method method, const TwoSampleData& data,
                             const SplineBasis& basis, const MixtureRates& rates,
                             double nu, const Scenario& sc) {
    TargetValues tv;
    if (method == Method::Np) {
        const WeightedCdfPair cdfs = np_inversion_cdfs(data, rates);
        tv.roc02 = roc_curve(cdfs, {0.2})[0];
        tv.auc = auc(cdfs);
        tv.pauc = pauc(cdfs, sc.s0, sc.s1);
        tv.youden = youden_from_cdfs(cdfs).j;
        return tv;
    }
    const MixtureRates used = method == Method::Naive ? MixtureRates{1.0, 1.0} : rates;
    const DensityRatioFit fit = fit_em(data, basis, used, nu, sc.em);
    const WeightedCdfPair cdfs = estimate_cdfs(fit, data);
    tv.roc02 = roc_curve(cdfs, {0.2})[0];
    tv.auc = auc(cdfs);
    tv.pauc = pauc(cdfs, sc.s0, sc.s1);
    tv.youden = youden(fit, cdfs).j;
    return tv;
}

struct RepRecord {
    TargetValues value;
    bool ok = false;
};

MetricsRow aggregate(const std::string& method, const std::string& target,
                     const std::vector<RepRecord>& recs, double truth,
                     double TargetValues::*field) {
    MetricsRow row;
    row.method = method;
    row.target = target;
    std::vector<double> vals;
    vals.reserve(recs.size());
    for (const auto& r : recs)
        if (r.ok) vals.push_back(r.value.*field);
    row.reps_used = static_cast<int>(vals.size());
    row.failures = static_cast<int>(recs.size()) - row.reps_used;
    if (vals.empty()) {
        row.bias = row.sd = row.mse = std::numeric_limits<double>::quiet_NaN();
        return row;
    }

    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double var = 0.0, mse = 0.0;
    for (double v : vals) {
        var += (v - mean) * (v - mean);
        mse += (v - truth) * (v - truth);
    }
    const double sd = vals.size() > 1 ? std::sqrt(var / (vals.size() - 1)) : 0.0;
    row.bias = 100.0 * (mean - truth);
    row.sd = 100.0 * sd;
    row.mse = 100.0 * (mse / vals.size());
    return row;
}

} // namespace

ScenarioResult run_scenario(const Scenario& sc) {
    if (sc.reps < 1) throw Error("invalid-scenario", "need at least one replication");
    const MixtureRates rates = bayes_rates(sc.prevalence, sc.se, sc.sp);
    const SplineBasis basis = make_basis(sc.n_basis, sc.degree);
    const TrueTargets truth = true_targets(sc);
    const int n_markers = sc.dgp == Dgp::BivariateNormal ? 2 : 1;

    ScenarioResult result;

    // Resolve the penalty per method and marker: fixed if given, otherwise
    // cross-validated on the first replication and reused (per_rep_cv reruns
    // the selection inside every replication instead).
    std::vector<std::vector<double>> nu(2, std::vector<double>(n_markers, sc.fixed_nu));
    auto select_nu = [&](const TwoSampleData& data, Method method,
                         std::uint64_t salt) -> double {
        CvPlan plan = sc.cv;
        plan.seed = mix64(sc.seed ^ salt);
        const MixtureRates used = method == Method::Naive ? MixtureRates{1.0, 1.0} : rates;
        return cv_select_nu(data, basis, used, plan, sc.em).nu_star;
    };
    const bool needs_cv = sc.fixed_nu < 0.0;
    if (needs_cv && !sc.per_rep_cv) {
        auto rng = substream(sc.seed, 0);
        std::vector<const TwoSampleData*> markers;
        UnivariateSample uni;
        BivariateSample bi;
        if (sc.dgp == Dgp::UnivariateNormal) {
            uni = gen_univariate_normal(sc, rng);
            markers = {&uni.data};
        } else {
            bi = gen_bivariate_normal(sc, rng);
            markers = {&bi.marker1, &bi.marker2};
        }
        for (int mk = 0; mk < n_markers; ++mk) {
            for (Method method : sc.methods) {
                if (method == Method::Np) continue;
                const int mi = method == Method::Naive ? 1 : 0;
                nu[mi][mk] = select_nu(*markers[mk], method,
                                       0x1000u * (mk + 1) + (mi + 1));
                result.selected_nu.emplace_back(
                    method_name(method) + (n_markers > 1 ? "/marker" + std::to_string(mk + 1) : ""),
                    nu[mi][mk]);
            }
        }
    }

    // method-major storage, replication order fixed by index
    std::vector<std::vector<RepRecord>> records(sc.methods.size(),
                                                std::vector<RepRecord>(sc.reps));

    parallel_for(
        static_cast<std::size_t>(sc.reps),
        [&](std::size_t rep) {
            auto rng = substream(sc.seed, rep);
            UnivariateSample uni;
            BivariateSample bi;
            std::vector<const TwoSampleData*> markers;
            if (sc.dgp == Dgp::UnivariateNormal) {
                uni = gen_univariate_normal(sc, rng);
                markers = {&uni.data};
            } else {
                bi = gen_bivariate_normal(sc, rng);
                markers = {&bi.marker1, &bi.marker2};
            }

            for (std::size_t mi = 0; mi < sc.methods.size(); ++mi) {
                const Method method = sc.methods[mi];
                try {
                    TargetValues per_marker[2];
                    for (int mk = 0; mk < n_markers; ++mk) {
                        double nu_use = 0.0;
                        if (method != Method::Np) {
                            const int slot = method == Method::Naive ? 1 : 0;
                            nu_use = nu[slot][mk];
                            if (needs_cv && sc.per_rep_cv) {
                                CvPlan plan = sc.cv;
                                plan.n_threads = 1;
                                plan.seed = mix64(sc.seed ^ (rep * 8191 + mk * 17 + slot));
                                const MixtureRates used = method == Method::Naive
                                                              ? MixtureRates{1.0, 1.0}
                                                              : rates;
                                nu_use = cv_select_nu(*markers[mk], basis, used, plan, sc.em)
                                             .nu_star;
                            }
                        }
                        per_marker[mk] =
                            evaluate_method(method, *markers[mk], basis, rates, nu_use, sc);
                    }
                    RepRecord rec;
                    rec.ok = true;
                    if (n_markers == 1) {
                        rec.value = per_marker[0];
                    } else {
                        rec.value.roc02 = per_marker[0].roc02 - per_marker[1].roc02;
                        rec.value.auc = per_marker[0].auc - per_marker[1].auc;
                        rec.value.youden = per_marker[0].youden - per_marker[1].youden;
                        rec.value.pauc = per_marker[0].pauc - per_marker[1].pauc;
                    }
                    records[mi][rep] = rec;
                } catch (const Error&) {
                    records[mi][rep].ok = false;
                }
            }
        },
        sc.n_threads);

    const bool is_delta = n_markers > 1;
    const TargetValues& tt = is_delta ? truth.delta : truth.marker1;
    const std::string prefix = is_delta ? "d" : "";
    for (std::size_t mi = 0; mi < sc.methods.size(); ++mi) {
        const std::string name = method_name(sc.methods[mi]);
        result.rows.push_back(aggregate(name, prefix + "ROC(0.2)", records[mi], tt.roc02,
                                        &TargetValues::roc02));
        result.rows.push_back(
            aggregate(name, prefix + "AUC", records[mi], tt.auc, &TargetValues::auc));
        result.rows.push_back(aggregate(name, prefix + "Youden", records[mi], tt.youden,
                                        &TargetValues::youden));
        result.rows.push_back(
            aggregate(name, prefix + "pAUC", records[mi], tt.pauc, &TargetValues::pauc));
    }
    return result;
}

} // namespace rocem

#pragma once

#include "rocem/likelihood.hpp"
#include "rocem/solver.hpp"
#include "rocem/tuning.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rocem {

enum class Dgp { UnivariateNormal, BivariateNormal };
enum class Method { Em, Np, Naive };

std::string method_name(Method m);

/// One Monte Carlo configuration. The reference-standard accuracies pi0/pi1
/// are derived from (prevalence, se, sp) by Bayes' formula.
struct Scenario {
    Dgp dgp = Dgp::UnivariateNormal;
    double prevalence = 0.4;
    double se = 0.95;
    double sp = 0.95;
    int n = 100;
    int m = 100;
    double rho = 0.2; // cross-marker correlation, bivariate only
    int reps = 1000;
    std::uint64_t seed = 1;
    std::vector<Method> methods = {Method::Em, Method::Np, Method::Naive};
    double s0 = 0.1;
    double s1 = 0.3;
    int n_basis = 50;
    int degree = 4;
    double fixed_nu = -1.0; // < 0 -> select by cross-validation
    bool per_rep_cv = false; // rerun CV inside every replication (slow)
    CvPlan cv;
    EmOptions em;
    /// The diseased group takes the larger component means. Turning this off
    /// swaps the group means (an anti-diagnostic orientation, kept for
    /// diagnostics only).
    bool diseased_high = true;
    unsigned n_threads = 0; // 0 -> ROCEM_THREADS / hardware
};

/// Bayes conversion from (prevalence, sensitivity, specificity) to the
/// label accuracies pi0 = P(G=0|R=0), pi1 = P(G=1|R=1).
MixtureRates bayes_rates(double pi, double se, double sp);

struct UnivariateSample {
    TwoSampleData data;
    std::vector<int> g; // hidden true status per pooled observation
};

/// Mixture-contaminated two-sample draw: nominal controls are N(0,1) with
/// probability pi0 (else N(1,1)); nominal cases are N(1,1) with probability
/// pi1 (else N(0,1)).
UnivariateSample gen_univariate_normal(const Scenario& sc, std::mt19937_64& rng);

struct BivariateSample {
    TwoSampleData marker1;
    TwoSampleData marker2;
    std::vector<int> g;
};

/// Correlated bivariate normal draw with unit variances and correlation rho;
/// component means (2,1) for the diseased group and (0,0) otherwise. Markers
/// are extracted marginally, each with its own domain transform.
BivariateSample gen_bivariate_normal(const Scenario& sc, std::mt19937_64& rng);

struct TargetValues {
    double roc02 = 0.0; // ROC evaluated at s = 0.2
    double auc = 0.0;
    double youden = 0.0;
    double pauc = 0.0;
};

struct TrueTargets {
    TargetValues marker1; // the only marker in the univariate design
    TargetValues marker2;
    TargetValues delta; // marker1 - marker2
    double c0_marker1 = 0.0;
    double c0_marker2 = 0.0;
};

/// Closed-form targets for a pair of unit-variance normals N(mu0,1) vs
/// N(mu1,1): AUC and ROC via the normal CDF, Youden by maximizing F0 - F1,
/// partial AUC by adaptive quadrature (absolute accuracy 1e-10).
TargetValues binormal_targets(double mu0, double mu1, double s0, double s1,
                              double* c0 = nullptr);

/// True target values for the scenario's data-generating process.
/// Throws Error("unsupported-dgp") for anything but the Gaussian designs.
TrueTargets true_targets(const Scenario& sc);

/// One summary row: bias, sd and mse of an estimated target across the
/// successful replications, each multiplied by 100 to match the usual
/// reporting scale.
struct MetricsRow {
    std::string method;
    std::string target;
    double bias = 0.0;
    double sd = 0.0;
    double mse = 0.0;
    int reps_used = 0;
    int failures = 0;
};

struct ScenarioResult {
    std::vector<MetricsRow> rows;
    std::vector<std::pair<std::string, double>> selected_nu; // per method/marker
};

/// Runs the full Monte Carlo: per-replication RNG substreams keyed by
/// (seed, replication) make the result independent of the worker count.
/// A replication failing for one estimator is dropped and counted for that
/// estimator only.
ScenarioResult run_scenario(const Scenario& sc);

} // namespace rocem

#include "rocem/cli.hpp"

#include "rocem/baselines.hpp"
#include "rocem/errors.hpp"
#include "rocem/estimators.hpp"
#include "rocem/io.hpp"
#include "rocem/parallel.hpp"
#include "rocem/simharness.hpp"
#include "rocem/tuning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace rocem {

using nlohmann::json;

namespace {

void emit_error(std::ostream& err, const std::string& code, const std::string& message) {
    json e;
    e["error"]["code"] = code;
    e["error"]["message"] = message;
    err << e.dump(2) << "\n";
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        emit_error(err, e.code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error(err, "internal-error", e.what());
        return 2;
    }
}

std::vector<double> report_s_grid() {
    std::vector<double> grid(99);
    for (int i = 0; i < 99; ++i) grid[i] = (i + 1) / 100.0;
    return grid;
}

json summary_json(const RocSummary& s) {
    json grid = json::array();
    for (std::size_t i = 0; i < s.s_grid.size(); ++i)
        grid.push_back(json::array({s.s_grid[i], s.roc[i]}));
    json out;
    out["roc_grid"] = grid;
    out["auc"] = s.auc;
    out["pauc"] = {{"s0", s.s0}, {"s1", s.s1}, {"value", s.pauc}};
    out["youden"] = {{"j", s.youden_j},
                     {"cutoff_raw", s.cutoff_raw},
                     {"cutoff_unit", s.cutoff_unit}};
    return out;
}

bool trace_is_monotone(const std::vector<double>& trace) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i] < trace[i - 1] - 1e-10 * (std::abs(trace[i - 1]) + 1.0)) return false;
    return true;
}

json diagnostics_json(const DensityRatioFit& fit) {
    json d;
    d["em_iterations"] = fit.n_em_iters;
    d["final_objective"] = fit.final_objective;
    d["converged"] = fit.converged;
    d["ridged"] = fit.ridged;
    d["nu"] = fit.nu;
    d["roughness"] = fit.roughness();
    d["objective_monotone"] = trace_is_monotone(fit.objective_trace);
    return d;
}

std::vector<double> nu_grid_from(const ModelFlags& model) {
    return default_nu_grid(model.nu_grid_min, model.nu_grid_max, model.nu_grid_points);
}

struct NuChoice {
    double nu = 0.0;
    bool from_cv = false;
    CvResult cv;
};

NuChoice choose_nu(const TwoSampleData& data, const SplineBasis& basis,
                   const MixtureRates& rates, const ModelFlags& model) {
    NuChoice choice;
    if (model.nu >= 0.0) {
        choice.nu = model.nu;
        return choice;
    }
    CvPlan plan;
    plan.n_folds = model.cv_folds;
    plan.nu_grid = nu_grid_from(model);
    plan.seed = model.seed;
    plan.n_threads = thread_budget(0);
    choice.cv = cv_select_nu(data, basis, rates, plan);
    choice.nu = choice.cv.nu_star;
    choice.from_cv = true;
    return choice;
}

json cv_json(const CvResult& cv) {
    json out;
    out["grid"] = cv.nu_grid;
    out["scores"] = cv.scores;
    out["nu_star"] = cv.nu_star;
    out["failed_fits"] = cv.n_failed_fits;
    return out;
}

void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("write-failed", "cannot open '" + out_path + "' for writing");
    f << text;
}

std::string sibling_json_path(const std::string& csv_path) {
    if (csv_path.size() > 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
        return csv_path.substr(0, csv_path.size() - 4) + ".json";
    return csv_path + ".json";
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace

int cmd_fit(const FitOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const TwoSampleColumns cols = load_two_sample_csv(
            {opts.data.input, opts.data.value_col, opts.data.label_col, opts.data.log_transform});
        const TwoSampleData data = make_two_sample(cols.x, cols.y);
        const MixtureRates rates = make_rates(opts.data.pi0, opts.data.pi1);
        const SplineBasis basis = make_basis(opts.model.k, opts.model.degree);

        const NuChoice choice = choose_nu(data, basis, rates, opts.model);
        const DensityRatioFit fit = fit_em(data, basis, rates, choice.nu);
        const WeightedCdfPair cdfs = estimate_cdfs(fit, data);
        const std::vector<double> grid = report_s_grid();
        const RocSummary summary = summarize(cdfs, youden(fit, cdfs), grid, opts.model.s0,
                                             opts.model.s1, data.transform);

        json report;
        report["inputs"] = {{"file", opts.data.input},
                            {"n", data.n()},
                            {"m", data.m()},
                            {"pi0", rates.pi0},
                            {"pi1", rates.pi1},
                            {"k", opts.model.k},
                            {"degree", opts.model.degree},
                            {"log", opts.data.log_transform},
                            {"s0", opts.model.s0},
                            {"s1", opts.model.s1},
                            {"seed", opts.model.seed},
                            {"nu", choice.nu},
                            {"nu_source", choice.from_cv ? "cv" : "fixed"}};
        if (choice.from_cv) report["inputs"]["cv"] = cv_json(choice.cv);
        report["summary"] = summary_json(summary);
        report["diagnostics"] = diagnostics_json(fit);

        if (opts.with_baselines) {
            const WeightedCdfPair np_cdfs = np_inversion_cdfs(data, rates);
            report["baselines"]["np"]["summary"] = summary_json(summarize(
                np_cdfs, youden_from_cdfs(np_cdfs), grid, opts.model.s0, opts.model.s1,
                data.transform));

            NuChoice naive_choice = choice;
            if (choice.from_cv)
                naive_choice = choose_nu(data, basis, MixtureRates{1.0, 1.0}, opts.model);
            const DensityRatioFit nf = naive_fit(data, basis, naive_choice.nu);
            const WeightedCdfPair naive_cdfs = estimate_cdfs(nf, data);
            report["baselines"]["naive"]["summary"] = summary_json(
                summarize(naive_cdfs, youden(nf, naive_cdfs), grid, opts.model.s0,
                          opts.model.s1, data.transform));
            report["baselines"]["naive"]["diagnostics"] = diagnostics_json(nf);
        }

        write_output(report.dump(2) + "\n", opts.out, out);
        return 0;
    });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Scenario sc;
        if (opts.dgp == "uni")
            sc.dgp = Dgp::UnivariateNormal;
        else if (opts.dgp == "bi")
            sc.dgp = Dgp::BivariateNormal;
        else
            throw Error("unsupported-dgp", "dgp must be 'uni' or 'bi'");
        sc.prevalence = opts.pi;
        sc.se = opts.se;
        sc.sp = opts.sp;
        sc.n = opts.n;
        sc.m = opts.m;
        sc.rho = opts.rho;
        sc.reps = opts.reps;
        sc.seed = opts.seed;
        sc.s0 = opts.model.s0;
        sc.s1 = opts.model.s1;
        sc.n_basis = opts.model.k;
        sc.degree = opts.model.degree;
        sc.fixed_nu = opts.model.nu;
        sc.per_rep_cv = opts.per_rep_cv;
        sc.cv.n_folds = opts.model.cv_folds;
        sc.cv.nu_grid = nu_grid_from(opts.model);
        sc.n_threads = 0;

        sc.methods.clear();
        std::stringstream ms(opts.methods);
        std::string tok;
        while (std::getline(ms, tok, ',')) {
            if (tok == "em")
                sc.methods.push_back(Method::Em);
            else if (tok == "np")
                sc.methods.push_back(Method::Np);
            else if (tok == "naive")
                sc.methods.push_back(Method::Naive);
            else
                throw Error("unknown-method", "method '" + tok + "' is not em|np|naive");
        }
        if (sc.methods.empty()) throw Error("unknown-method", "no methods requested");

        const ScenarioResult res = run_scenario(sc);

        std::ostringstream csv;
        csv << "se_sp,n_m,method,target,bias,sd,mse\n";
        const std::string se_sp =
            format_fixed(sc.se, 2) + "/" + format_fixed(sc.sp, 2);
        const std::string n_m = std::to_string(sc.n) + "/" + std::to_string(sc.m);
        for (const MetricsRow& row : res.rows) {
            csv << se_sp << "," << n_m << "," << row.method << "," << row.target << ","
                << format_fixed(row.bias, 4) << "," << format_fixed(row.sd, 4) << ","
                << format_fixed(row.mse, 4) << "\n";
        }

        json j;
        j["scenario"] = {{"dgp", opts.dgp},     {"pi", sc.prevalence},
                         {"se", sc.se},         {"sp", sc.sp},
                         {"n", sc.n},           {"m", sc.m},
                         {"rho", sc.rho},       {"reps", sc.reps},
                         {"seed", sc.seed},     {"s0", sc.s0},
                         {"s1", sc.s1},         {"k", sc.n_basis},
                         {"degree", sc.degree}, {"per_rep_cv", sc.per_rep_cv}};
        j["scale"] = "x100";
        j["rows"] = json::array();
        for (const MetricsRow& row : res.rows)
            j["rows"].push_back({{"method", row.method},
                                 {"target", row.target},
                                 {"bias", row.bias},
                                 {"sd", row.sd},
                                 {"mse", row.mse},
                                 {"reps_used", row.reps_used},
                                 {"failures", row.failures}});
        for (const auto& [name, nu] : res.selected_nu) j["selected_nu"][name] = nu;

        if (opts.out.empty()) {
            out << csv.str();
        } else {
            write_output(csv.str(), opts.out, out);
            write_output(j.dump(2) + "\n", sibling_json_path(opts.out), out);
        }
        return 0;
    });
}

int cmd_roc_points(const RocPointsOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const TwoSampleColumns cols = load_two_sample_csv(
            {opts.data.input, opts.data.value_col, opts.data.label_col, opts.data.log_transform});
        const TwoSampleData data = make_two_sample(cols.x, cols.y);
        const MixtureRates rates = make_rates(opts.data.pi0, opts.data.pi1);
        const SplineBasis basis = make_basis(opts.model.k, opts.model.degree);

        const NuChoice choice = choose_nu(data, basis, rates, opts.model);
        const DensityRatioFit fit = fit_em(data, basis, rates, choice.nu);
        const WeightedCdfPair em_cdfs = estimate_cdfs(fit, data);
        const WeightedCdfPair np_cdfs = np_inversion_cdfs(data, rates);

        NuChoice naive_choice = choice;
        if (choice.from_cv)
            naive_choice = choose_nu(data, basis, MixtureRates{1.0, 1.0}, opts.model);
        const DensityRatioFit nf = naive_fit(data, basis, naive_choice.nu);
        const WeightedCdfPair naive_cdfs = estimate_cdfs(nf, data);

        constexpr int kPoints = 501;
        std::vector<double> s_grid(kPoints);
        for (int i = 0; i < kPoints; ++i)
            s_grid[i] = 0.001 + (0.999 - 0.001) * i / (kPoints - 1);
        const std::vector<double> roc_em = roc_curve(em_cdfs, s_grid);
        const std::vector<double> roc_np = roc_curve(np_cdfs, s_grid);
        const std::vector<double> roc_naive = roc_curve(naive_cdfs, s_grid);

        const StepCdf ecdf0 = empirical_cdf(
            std::vector<double>(data.t.begin(), data.t.begin() + data.n()));
        const StepCdf ecdf1 =
            empirical_cdf(std::vector<double>(data.t.begin() + data.n(), data.t.end()));

        std::ostringstream csv;
        csv << "s,roc_em,roc_np,roc_naive";
        if (opts.with_cdfs) csv << ",t,f0_em,f1_em,f0_ecdf,f1_ecdf";
        csv << "\n";
        for (int i = 0; i < kPoints; ++i) {
            csv << format_fixed(s_grid[i], 6) << "," << format_fixed(roc_em[i], 6) << ","
                << format_fixed(roc_np[i], 6) << "," << format_fixed(roc_naive[i], 6);
            if (opts.with_cdfs) {
                const double t = static_cast<double>(i) / (kPoints - 1);
                csv << "," << format_fixed(t, 6) << "," << format_fixed(em_cdfs.f0(t), 6)
                    << "," << format_fixed(em_cdfs.f1(t), 6) << ","
                    << format_fixed(ecdf0(t), 6) << "," << format_fixed(ecdf1(t), 6);
            }
            csv << "\n";
        }
        write_output(csv.str(), opts.out, out);
        return 0;
    });
}

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto [cols1, cols2] = load_two_marker_csv(
            {opts.data.input, opts.data.value_col, opts.data.label_col, opts.data.log_transform},
            opts.value_col2);
        const MixtureRates rates = make_rates(opts.data.pi0, opts.data.pi1);
        const SplineBasis basis = make_basis(opts.model.k, opts.model.degree);
        const std::vector<double> grid = report_s_grid();

        auto fit_marker = [&](const TwoSampleColumns& cols) {
            const TwoSampleData data = make_two_sample(cols.x, cols.y);
            const NuChoice choice = choose_nu(data, basis, rates, opts.model);
            const DensityRatioFit fit = fit_em(data, basis, rates, choice.nu);
            const WeightedCdfPair cdfs = estimate_cdfs(fit, data);
            return summarize(cdfs, youden(fit, cdfs), grid, opts.model.s0, opts.model.s1,
                             data.transform);
        };
        const RocSummary s1 = fit_marker(cols1);
        const RocSummary s2 = fit_marker(cols2);
        const RocDeltas d = compare_markers(s1, s2);

        json report;
        report["inputs"] = {{"file", opts.data.input},
                            {"value_col", opts.data.value_col},
                            {"value_col2", opts.value_col2},
                            {"pi0", rates.pi0},
                            {"pi1", rates.pi1},
                            {"k", opts.model.k},
                            {"degree", opts.model.degree},
                            {"seed", opts.model.seed}};
        report["markers"]["marker1"] = summary_json(s1);
        report["markers"]["marker2"] = summary_json(s2);
        json droc = json::array();
        for (std::size_t i = 0; i < d.s_grid.size(); ++i)
            droc.push_back(json::array({d.s_grid[i], d.droc[i]}));
        report["delta"] = {{"roc_grid", droc},
                           {"auc", d.dauc},
                           {"pauc", d.dpauc},
                           {"youden", d.dyouden}};
        write_output(report.dump(2) + "\n", opts.out, out);
        return 0;
    });
}

namespace {

void add_data_flags(CLI::App* cmd, DataFlags& data) {
    cmd->add_option("input", data.input, "CSV file with a header row")->required();
    cmd->add_option("--value-col", data.value_col, "biomarker column name");
    cmd->add_option("--label-col", data.label_col, "0/1 reference-label column name");
    cmd->add_flag("--log", data.log_transform, "log-transform the biomarker values");
    cmd->add_option("--pi0", data.pi0, "P(G=0 | R=0), accuracy of the control label");
    cmd->add_option("--pi1", data.pi1, "P(G=1 | R=1), accuracy of the case label");
}

void add_model_flags(CLI::App* cmd, ModelFlags& model) {
    cmd->add_option("--k", model.k, "number of B-spline basis functions");
    cmd->add_option("--degree", model.degree, "polynomial degree of the spline pieces");
    cmd->add_option("--nu", model.nu, "fixed roughness penalty (skips cross-validation)");
    cmd->add_option("--cv-folds", model.cv_folds, "cross-validation folds");
    cmd->add_option("--nu-grid-min", model.nu_grid_min, "smallest penalty candidate");
    cmd->add_option("--nu-grid-max", model.nu_grid_max, "largest penalty candidate");
    cmd->add_option("--nu-grid-points", model.nu_grid_points, "penalty grid size");
    cmd->add_option("--s0", model.s0, "partial AUC lower endpoint");
    cmd->add_option("--s1", model.s1, "partial AUC upper endpoint");
    cmd->add_option("--seed", model.seed, "RNG seed");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ROC analysis for continuous biomarkers under an imperfect reference standard"};
    app.require_subcommand(1);

    FitOptions fit_opts;
    auto* fit_cmd = app.add_subcommand(
        "fit", "Fit the penalized density-ratio model and report ROC summaries");
    add_data_flags(fit_cmd, fit_opts.data);
    add_model_flags(fit_cmd, fit_opts.model);
    fit_cmd->add_flag("--with-baselines", fit_opts.with_baselines,
                      "also run the inversion and naive baselines");
    fit_cmd->add_option("--out", fit_opts.out, "write the JSON report here instead of stdout");

    SimulateOptions sim_opts;
    auto* sim_cmd =
        app.add_subcommand("simulate", "Monte Carlo bias/sd/mse table for the estimators");
    sim_cmd->add_option("--dgp", sim_opts.dgp, "data-generating process: uni | bi");
    sim_cmd->add_option("--pi", sim_opts.pi, "disease prevalence P(G=1)");
    sim_cmd->add_option("--se", sim_opts.se, "sensitivity of the reference standard");
    sim_cmd->add_option("--sp", sim_opts.sp, "specificity of the reference standard");
    sim_cmd->add_option("--n", sim_opts.n, "nominal control sample size");
    sim_cmd->add_option("--m", sim_opts.m, "nominal case sample size");
    sim_cmd->add_option("--rho", sim_opts.rho, "cross-marker correlation (bi only)");
    sim_cmd->add_option("--reps", sim_opts.reps, "Monte Carlo replications");
    sim_cmd->add_option("--seed", sim_opts.seed, "RNG seed");
    sim_cmd->add_option("--methods", sim_opts.methods, "comma list of em,np,naive");
    sim_cmd->add_option("--k", sim_opts.model.k, "number of B-spline basis functions");
    sim_cmd->add_option("--degree", sim_opts.model.degree, "spline polynomial degree");
    sim_cmd->add_option("--nu", sim_opts.model.nu, "fixed roughness penalty");
    sim_cmd->add_option("--cv-folds", sim_opts.model.cv_folds, "cross-validation folds");
    sim_cmd->add_option("--nu-grid-min", sim_opts.model.nu_grid_min, "smallest penalty candidate");
    sim_cmd->add_option("--nu-grid-max", sim_opts.model.nu_grid_max, "largest penalty candidate");
    sim_cmd->add_option("--nu-grid-points", sim_opts.model.nu_grid_points, "penalty grid size");
    sim_cmd->add_option("--s0", sim_opts.model.s0, "partial AUC lower endpoint");
    sim_cmd->add_option("--s1", sim_opts.model.s1, "partial AUC upper endpoint");
    sim_cmd->add_flag("--per-rep-cv", sim_opts.per_rep_cv,
                      "rerun cross-validation inside every replication");
    sim_cmd->add_option("--out", sim_opts.out,
                        "write the CSV table here (a .json sibling is written too)");

    RocPointsOptions roc_opts;
    auto* roc_cmd = app.add_subcommand("roc-points",
                                       "Tabulate the estimated ROC curves on a fine grid");
    add_data_flags(roc_cmd, roc_opts.data);
    add_model_flags(roc_cmd, roc_opts.model);
    roc_cmd->add_flag("--with-cdfs", roc_opts.with_cdfs,
                      "append fitted and empirical CDF columns");
    roc_cmd->add_option("--out", roc_opts.out, "write the CSV here instead of stdout");

    CompareOptions cmp_opts;
    auto* cmp_cmd = app.add_subcommand("compare", "Two-marker difference report");
    add_data_flags(cmp_cmd, cmp_opts.data);
    cmp_cmd->add_option("--value-col2", cmp_opts.value_col2, "second biomarker column")
        ->required();
    add_model_flags(cmp_cmd, cmp_opts.model);
    cmp_cmd->add_option("--out", cmp_opts.out, "write the JSON report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        emit_error(err, "usage-error", e.what());
        return e.get_exit_code();
    }

    if (fit_cmd->parsed()) return cmd_fit(fit_opts, out, err);
    if (sim_cmd->parsed()) return cmd_simulate(sim_opts, out, err);
    if (roc_cmd->parsed()) return cmd_roc_points(roc_opts, out, err);
    if (cmp_cmd->parsed()) return cmd_compare(cmp_opts, out, err);
    emit_error(err, "usage-error", "no subcommand given");
    return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("rocem");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace rocem

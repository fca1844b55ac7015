#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rocem {

/// Flags shared by the data-consuming subcommands.
struct DataFlags {
    std::string input;
    std::string value_col = "value";
    std::string label_col = "label";
    bool log_transform = false;
    double pi0 = 1.0;
    double pi1 = 1.0;
};

/// Model / tuning flags shared by fit-like subcommands.
struct ModelFlags {
    int k = 50;
    int degree = 4;
    double nu = -1.0; // < 0 -> cross-validated
    int cv_folds = 5;
    double nu_grid_min = 1e-4;
    double nu_grid_max = 1e2;
    int nu_grid_points = 15;
    double s0 = 0.1;
    double s1 = 0.3;
    std::uint64_t seed = 0;
};

struct FitOptions {
    DataFlags data;
    ModelFlags model;
    bool with_baselines = false;
    std::string out;
};

struct SimulateOptions {
    std::string dgp = "uni"; // uni | bi
    double pi = 0.4;
    double se = 0.95;
    double sp = 0.95;
    int n = 100;
    int m = 100;
    double rho = 0.2;
    int reps = 10;
    std::uint64_t seed = 1;
    std::string methods = "em,np,naive";
    ModelFlags model;
    bool per_rep_cv = false;
    std::string out;
};

struct RocPointsOptions {
    DataFlags data;
    ModelFlags model;
    bool with_cdfs = false;
    std::string out;
};

struct CompareOptions {
    DataFlags data;
    std::string value_col2;
    ModelFlags model;
    std::string out;
};

/// Subcommand entry points. Reports go to `out` (JSON or CSV depending on the
/// command); failures emit a structured {"error": {...}} object on `err` and
/// return a nonzero exit code.
int cmd_fit(const FitOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_roc_points(const RocPointsOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the subcommands.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rocem

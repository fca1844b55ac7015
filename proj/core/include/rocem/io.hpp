#pragma once

#include <string>
#include <vector>

namespace rocem {

/// Column-extraction request for a headed CSV file.
struct CsvRequest {
    std::string path;
    std::string value_col = "value";
    std::string label_col = "label";
    bool log_transform = false; // natural log of the value column
};

struct TwoSampleColumns {
    std::vector<double> x; // rows with label 0
    std::vector<double> y; // rows with label 1
};

/// Reads a comma-separated file with a header row. The label column must
/// contain only 0/1; the value column must be numeric. Errors carry the
/// offending row number: Error("parse-error"), Error("column-missing"),
/// Error("empty-group"), Error("non-positive-log"), Error("file-not-found").
TwoSampleColumns load_two_sample_csv(const CsvRequest& req);

/// Same, extracting two value columns against one label column (for marker
/// comparison). Returns {marker1, marker2}.
std::pair<TwoSampleColumns, TwoSampleColumns>
load_two_marker_csv(const CsvRequest& req, const std::string& value_col2);

} // namespace rocem

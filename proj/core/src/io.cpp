#include "rocem/io.hpp"

#include "rocem/errors.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

namespace rocem {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, std::size_t row, const std::string& col) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("parse-error", "row " + std::to_string(row) + ": cannot parse '" + s +
                                       "' in column '" + col + "' as a number");
    }
}

struct ColumnIndex {
    std::size_t value = 0;
    std::size_t value2 = 0;
    std::size_t label = 0;
    bool has_value2 = false;
};

ColumnIndex resolve_columns(const std::vector<std::string>& header, const CsvRequest& req,
                            const std::string& value_col2) {
    auto find = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw Error("column-missing", "column '" + name + "' not found in header");
    };
    ColumnIndex idx;
    idx.value = find(req.value_col);
    idx.label = find(req.label_col);
    if (!value_col2.empty()) {
        idx.value2 = find(value_col2);
        idx.has_value2 = true;
    }
    return idx;
}

std::pair<TwoSampleColumns, TwoSampleColumns>
load_impl(const CsvRequest& req, const std::string& value_col2) {
    std::ifstream in(req.path);
    if (!in) throw Error("file-not-found", "cannot open '" + req.path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw Error("parse-error", "file '" + req.path + "' is empty");
    const ColumnIndex idx = resolve_columns(split_csv_line(line), req, value_col2);

    TwoSampleColumns m1, m2;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::size_t needed =
            std::max(std::max(idx.value, idx.label), idx.has_value2 ? idx.value2 : 0);
        if (fields.size() <= needed)
            throw Error("parse-error", "row " + std::to_string(row) + ": expected at least " +
                                           std::to_string(needed + 1) + " fields");

        const std::string& label_str = fields[idx.label];
        int label;
        if (label_str == "0")
            label = 0;
        else if (label_str == "1")
            label = 1;
        else
            throw Error("parse-error", "row " + std::to_string(row) + ": label '" + label_str +
                                           "' is not 0 or 1");

        auto read_value = [&](std::size_t col_idx, const std::string& col_name) {
            double v = parse_double(fields[col_idx], row, col_name);
            if (req.log_transform) {
                if (!(v > 0.0))
                    throw Error("non-positive-log",
                                "row " + std::to_string(row) + ": value " + fields[col_idx] +
                                    " is not positive; cannot take log");
                v = std::log(v);
            }
            return v;
        };

        const double v1 = read_value(idx.value, req.value_col);
        (label == 0 ? m1.x : m1.y).push_back(v1);
        if (idx.has_value2) {
            const double v2 = read_value(idx.value2, value_col2);
            (label == 0 ? m2.x : m2.y).push_back(v2);
        }
    }

    if (m1.x.empty() || m1.y.empty())
        throw Error("empty-group", "need at least one row with label 0 and one with label 1");
    return {std::move(m1), std::move(m2)};
}

} // namespace

TwoSampleColumns load_two_sample_csv(const CsvRequest& req) {
    return load_impl(req, "").first;
}

std::pair<TwoSampleColumns, TwoSampleColumns>
load_two_marker_csv(const CsvRequest& req, const std::string& value_col2) {
    if (value_col2.empty())
        throw Error("column-missing", "marker comparison needs a second value column");
    return load_impl(req, value_col2);
}

} // namespace rocem

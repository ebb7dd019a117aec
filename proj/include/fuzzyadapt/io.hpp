#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fuzzyadapt/dataset.hpp"
#include "fuzzyadapt/errors.hpp"

namespace fuzzyadapt {

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

inline std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && issp(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

inline double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    const std::string t = trim(cell);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw InputError("non-numeric cell '" + cell + "' at row " + std::to_string(row)
                         + ", column " + column);
    return value;
}

/// Shortest representation that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace detail

/// Reads a comma-separated UTF-8 table with a header row. When
/// label_column is given, that column becomes the labels; all other
/// columns must be numeric and become features in file order.
inline Dataset load_dataset(const std::string& path,
                            const std::optional<std::string>& label_column = std::nullopt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string content = buffer.str();
    if (content.size() >= 3 && content.compare(0, 3, "\xEF\xBB\xBF") == 0)
        content.erase(0, 3);  // UTF-8 BOM

    std::vector<std::string> lines;
    {
        std::stringstream ss(content);
        std::string line;
        while (std::getline(ss, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) lines.push_back(line);
        }
    }
    if (lines.empty()) throw InputError("file '" + path + "' is empty");

    std::vector<std::string> header = detail::split_csv_line(lines[0]);
    for (auto& h : header) h = detail::trim(h);

    std::ptrdiff_t label_idx = -1;
    if (label_column) {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == *label_column) { label_idx = static_cast<std::ptrdiff_t>(j); break; }
        if (label_idx < 0)
            throw InputError("label column '" + *label_column + "' not found in '" + path + "'");
    }

    const std::size_t n = lines.size() - 1;
    if (n == 0) throw InputError("file '" + path + "' has a header but no data rows");
    const std::size_t d = header.size() - (label_idx >= 0 ? 1 : 0);
    if (d == 0) throw InputError("file '" + path + "' has no feature columns");

    Dataset ds;
    ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<std::string> labels;
    if (label_idx >= 0) labels.reserve(n);
    for (std::size_t j = 0; j < header.size(); ++j)
        if (static_cast<std::ptrdiff_t>(j) != label_idx) ds.feature_names.push_back(header[j]);

    for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::string> cells = detail::split_csv_line(lines[r + 1]);
        if (cells.size() != header.size())
            throw InputError("row " + std::to_string(r + 1) + " of '" + path + "' has "
                             + std::to_string(cells.size()) + " fields, expected "
                             + std::to_string(header.size()));
        Eigen::Index col = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (static_cast<std::ptrdiff_t>(j) == label_idx) {
                labels.push_back(detail::trim(cells[j]));
            } else {
                ds.features(static_cast<Eigen::Index>(r), col++) =
                    detail::parse_cell(cells[j], r + 1, header[j]);
            }
        }
    }
    if (label_idx >= 0) ds.labels = std::move(labels);
    validate_dataset(ds, "'" + path + "'");
    return ds;
}

/// Writes the dataset back in the load format. Feature values round-trip
/// bit-for-bit. The label column, when present, is written last.
inline void save_dataset(const std::string& path, const Dataset& ds,
                         const std::string& label_name = "label") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file '" + path + "'");
    std::vector<std::string> names = ds.feature_names;
    if (static_cast<Eigen::Index>(names.size()) != ds.dims())
        names = default_feature_names(ds.dims());
    for (Eigen::Index j = 0; j < ds.dims(); ++j) {
        if (j) out << ',';
        out << names[static_cast<std::size_t>(j)];
    }
    if (ds.labels) out << ',' << label_name;
    out << '\n';
    for (Eigen::Index i = 0; i < ds.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.dims(); ++j) {
            if (j) out << ',';
            out << detail::format_double(ds.features(i, j));
        }
        if (ds.labels) out << ',' << (*ds.labels)[static_cast<std::size_t>(i)];
        out << '\n';
    }
    if (!out) throw InputError("failed while writing '" + path + "'");
}

/// Writes a single-column label file (used for ground truth side channels).
inline void save_labels(const std::string& path, const std::vector<std::string>& labels,
                        const std::string& label_name = "label") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file '" + path + "'");
    out << label_name << '\n';
    for (const auto& l : labels) out << l << '\n';
}

inline std::vector<std::string> load_labels(const std::string& path,
                                            const std::string& label_name = "label") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file '" + path + "'");
    std::vector<std::string> labels;
    std::string line;
    bool first = true;
    std::ptrdiff_t col = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (first) {
            first = false;
            col = -1;
            for (std::size_t j = 0; j < fields.size(); ++j)
                if (detail::trim(fields[j]) == label_name) { col = static_cast<std::ptrdiff_t>(j); break; }
            if (col < 0)
                throw InputError("label column '" + label_name + "' not found in '" + path + "'");
            continue;
        }
        if (static_cast<std::size_t>(col) >= fields.size())
            throw InputError("row in '" + path + "' is missing the label column");
        labels.push_back(detail::trim(fields[static_cast<std::size_t>(col)]));
    }
    if (labels.empty()) throw InputError("file '" + path + "' contains no labels");
    return labels;
}

}  // namespace fuzzyadapt

#ifndef INTERAX_DATASET_HPP
#define INTERAX_DATASET_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "csv.hpp"

namespace interax {

struct attribute_schema {
    std::string name;
    std::vector<std::string> alphabet;  // first-occurrence order
    bool is_label = false;
};

// Immutable table of category indices, column-major.  Alphabets are the
// distinct observed values per column, so every stored index is valid by
// construction and outputs stay byte-stable across runs.
class dataset {
public:
    dataset(std::vector<attribute_schema> schemas,
            std::vector<std::vector<std::uint32_t>> columns)
        : schemas_(std::move(schemas)), columns_(std::move(columns)) {
        if (schemas_.empty() || columns_.size() != schemas_.size()) {
            throw data_error("dataset: schema/column arity mismatch");
        }
        n_rows_ = columns_[0].size();
        for (const auto& col : columns_) {
            if (col.size() != n_rows_) {
                throw data_error("dataset: ragged columns");
            }
        }
        if (n_rows_ == 0) {
            throw data_error("dataset: no instances");
        }
    }

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_attributes() const { return schemas_.size(); }

    const attribute_schema& schema(std::uint32_t a) const { return schemas_.at(a); }
    std::uint32_t cardinality(std::uint32_t a) const {
        return static_cast<std::uint32_t>(schemas_.at(a).alphabet.size());
    }
    std::uint32_t value(std::size_t row, std::uint32_t a) const { return columns_[a][row]; }
    const std::vector<std::uint32_t>& column(std::uint32_t a) const { return columns_.at(a); }

    const std::string& value_name(std::size_t row, std::uint32_t a) const {
        return schemas_[a].alphabet[columns_[a][row]];
    }

    std::optional<std::uint32_t> label_index() const {
        for (std::uint32_t a = 0; a < schemas_.size(); ++a) {
            if (schemas_[a].is_label) return a;
        }
        return std::nullopt;
    }

    std::uint32_t attribute_index(const std::string& name) const {
        for (std::uint32_t a = 0; a < schemas_.size(); ++a) {
            if (schemas_[a].name == name) return a;
        }
        throw data_error("no attribute named '" + name + "'");
    }

    std::vector<std::uint32_t> non_label_attributes() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t a = 0; a < schemas_.size(); ++a) {
            if (!schemas_[a].is_label) out.push_back(a);
        }
        return out;
    }

private:
    std::vector<attribute_schema> schemas_;
    std::vector<std::vector<std::uint32_t>> columns_;
    std::size_t n_rows_;
};

struct missing_policy {
    enum class mode_t { as_category, drop_row };
    mode_t mode = mode_t::as_category;
    std::string marker = "?";
};

// Equal-frequency binning of one numeric column.  Cut points sit between
// distinct values nearest the ideal quantile boundaries, so equal values
// never straddle a bin.  Returns "b0".."b{m-1}" labels; m < n_bins happens
// when there are too few distinct values (the caller may warn).
inline std::vector<std::string> bin_numeric(const std::vector<double>& values, int n_bins) {
    if (n_bins < 2) {
        throw std::invalid_argument("bin_numeric: need at least 2 bins");
    }
    const std::size_t n = values.size();
    std::map<double, std::size_t> freq;
    for (double v : values) ++freq[v];

    std::vector<double> distinct;
    std::vector<std::size_t> cum;  // cumulative count through each distinct value
    distinct.reserve(freq.size());
    std::size_t running = 0;
    for (const auto& [v, c] : freq) {
        distinct.push_back(v);
        running += c;
        cum.push_back(running);
    }

    // candidate cut after distinct[j]; pick the j whose cumulative count is
    // closest to each quantile target, keeping cuts strictly increasing
    std::vector<std::size_t> cuts;
    for (int i = 1; i < n_bins; ++i) {
        const double target = static_cast<double>(i) * static_cast<double>(n) / n_bins;
        std::size_t best = 0;
        double best_gap = -1.0;
        for (std::size_t j = 0; j + 1 < distinct.size(); ++j) {
            const double gap = std::abs(static_cast<double>(cum[j]) - target);
            if (best_gap < 0.0 || gap < best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best_gap < 0.0) break;  // single distinct value
        if (cuts.empty() || best > cuts.back()) {
            cuts.push_back(best);
        }
    }

    std::vector<std::string> labels(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t b = 0;
        for (std::size_t cut : cuts) {
            if (values[r] > distinct[cut]) ++b;
        }
        labels[r] = "b" + std::to_string(b);
    }
    return labels;
}

struct load_options {
    std::optional<std::string> label;
    missing_policy missing;
    std::vector<std::pair<std::string, int>> bins;  // column name -> bin count
    std::vector<std::string>* warnings = nullptr;
};

namespace detail {

inline void warn(const load_options& opt, const std::string& msg) {
    if (opt.warnings) opt.warnings->push_back(msg);
}

}  // namespace detail

inline dataset make_dataset(const std::vector<std::string>& header,
                            std::vector<std::vector<std::string>> cells,
                            const load_options& opt = {}) {
    const std::size_t n_cols = header.size();
    if (n_cols == 0) {
        throw data_error("empty header");
    }
    for (std::size_t i = 0; i < n_cols; ++i) {
        for (std::size_t j = i + 1; j < n_cols; ++j) {
            if (header[i] == header[j]) {
                throw data_error("duplicate column name '" + header[i] + "'");
            }
        }
    }
    for (std::size_t r = 0; r < cells.size(); ++r) {
        if (cells[r].size() != n_cols) {
            throw data_error("row " + std::to_string(r + 2) + " has " +
                             std::to_string(cells[r].size()) + " cells, expected " +
                             std::to_string(n_cols));
        }
    }

    if (opt.missing.mode == missing_policy::mode_t::drop_row) {
        std::vector<std::vector<std::string>> kept;
        kept.reserve(cells.size());
        for (auto& row : cells) {
            bool has_missing = false;
            for (const auto& cell : row) {
                if (cell == opt.missing.marker) {
                    has_missing = true;
                    break;
                }
            }
            if (!has_missing) kept.push_back(std::move(row));
        }
        if (kept.empty()) {
            throw data_error("all rows dropped by missing-value policy");
        }
        cells = std::move(kept);
    }
    if (cells.empty()) {
        throw data_error("no data rows");
    }

    // binning happens per column after row filtering; missing markers stay
    // categorical and never enter the numeric parse
    for (const auto& [col_name, k] : opt.bins) {
        std::size_t c = n_cols;
        for (std::size_t i = 0; i < n_cols; ++i) {
            if (header[i] == col_name) c = i;
        }
        if (c == n_cols) {
            throw data_error("--bin names unknown column '" + col_name + "'");
        }
        std::vector<double> nums;
        std::vector<std::size_t> rows_with_values;
        for (std::size_t r = 0; r < cells.size(); ++r) {
            const std::string& cell = cells[r][c];
            if (cell == opt.missing.marker) continue;
            try {
                std::size_t pos = 0;
                double v = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
                nums.push_back(v);
            } catch (const std::exception&) {
                throw data_error("column '" + col_name + "' is not numeric at row " +
                                 std::to_string(r + 2) + ": '" + cell + "'");
            }
            rows_with_values.push_back(r);
        }
        if (nums.empty()) {
            throw data_error("column '" + col_name + "' has no numeric values to bin");
        }
        auto labels = bin_numeric(nums, k);
        std::size_t distinct_bins = 0;
        {
            std::vector<std::string> uniq = labels;
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            distinct_bins = uniq.size();
        }
        if (distinct_bins < static_cast<std::size_t>(k)) {
            detail::warn(opt, "column '" + col_name + "': only " +
                                  std::to_string(distinct_bins) + " of " + std::to_string(k) +
                                  " requested bins are distinguishable");
        }
        for (std::size_t i = 0; i < rows_with_values.size(); ++i) {
            cells[rows_with_values[i]][c] = labels[i];
        }
    }

    std::vector<attribute_schema> schemas(n_cols);
    std::vector<std::vector<std::uint32_t>> columns(n_cols);
    bool label_found = false;
    for (std::size_t c = 0; c < n_cols; ++c) {
        schemas[c].name = header[c];
        if (opt.label && header[c] == *opt.label) {
            schemas[c].is_label = true;
            label_found = true;
        }
        std::unordered_map<std::string, std::uint32_t> index;
        auto& col = columns[c];
        col.reserve(cells.size());
        for (const auto& row : cells) {
            const std::string& cell = row[c];
            auto it = index.find(cell);
            if (it == index.end()) {
                it = index.emplace(cell, static_cast<std::uint32_t>(schemas[c].alphabet.size())).first;
                schemas[c].alphabet.push_back(cell);
            }
            col.push_back(it->second);
        }
    }
    if (opt.label && !label_found) {
        throw data_error("label column '" + *opt.label + "' not found");
    }
    return dataset(std::move(schemas), std::move(columns));
}

inline dataset load_csv(const std::string& path, const load_options& opt = {}) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) {
        throw data_error(path + " is empty");
    }
    std::vector<std::string> header = rows.front();
    rows.erase(rows.begin());
    return make_dataset(header, std::move(rows), opt);
}

}  // namespace interax

#endif

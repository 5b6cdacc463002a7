#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ancestral/errors.hpp"
#include "ancestral/vertex_set.hpp"

namespace ancestral {

/// N samples of m categorical variables, stored column-major as dense level
/// codes. Immutable once built.
class CategoricalTable {
public:
    CategoricalTable() = default;

    /// `labels[k]` names the levels of variable k; `columns[k][i]` is the code of
    /// sample i. Every level listed in `labels` is expected to be observed.
    CategoricalTable(std::vector<std::string> names, std::vector<std::vector<std::string>> labels,
                     std::vector<std::vector<int>> columns)
        : names_(std::move(names)), labels_(std::move(labels)), columns_(std::move(columns)) {
        if (names_.empty()) throw ContractError("table needs at least one variable");
        if (names_.size() > static_cast<std::size_t>(VertexSet::capacity))
            throw ContractError("at most 64 variables are supported");
        if (labels_.size() != names_.size() || columns_.size() != names_.size())
            throw ContractError("names, labels and columns disagree on the variable count");
        std::unordered_set<std::string> seen;
        for (const auto& n : names_)
            if (!seen.insert(n).second) throw ContractError("duplicate variable name '" + n + "'");
        n_samples_ = columns_.front().size();
        if (n_samples_ == 0) throw ContractError("table needs at least one sample");
        for (std::size_t k = 0; k < columns_.size(); ++k) {
            if (columns_[k].size() != n_samples_) throw ContractError("ragged columns");
            const int r = static_cast<int>(labels_[k].size());
            if (r < 1) throw ContractError("variable '" + names_[k] + "' has no levels");
            for (int c : columns_[k])
                if (c < 0 || c >= r) throw ContractError("code out of range for '" + names_[k] + "'");
        }
    }

    int n_vars() const { return static_cast<int>(names_.size()); }
    std::size_t n_samples() const { return n_samples_; }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int k) const { return names_.at(k); }
    const std::vector<std::string>& labels(int k) const { return labels_.at(k); }
    int levels(int k) const { return static_cast<int>(labels_.at(k).size()); }
    const std::vector<int>& column(int k) const { return columns_.at(k); }
    int code(std::size_t row, int k) const { return columns_[k][row]; }
    VertexSet all() const { return VertexSet::range(n_vars()); }

    /// Index of a variable name, or -1.
    int index_of(const std::string& name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
    }

    /// Keeps the listed variables in the given order. Levels keep their codes.
    CategoricalTable select(const std::vector<int>& keep) const {
        std::vector<std::string> n;
        std::vector<std::vector<std::string>> l;
        std::vector<std::vector<int>> c;
        for (int k : keep) {
            n.push_back(names_.at(k));
            l.push_back(labels_.at(k));
            c.push_back(columns_.at(k));
        }
        return CategoricalTable(std::move(n), std::move(l), std::move(c));
    }

    /// Rows picked by index (repeats allowed), used for bootstrap resampling.
    CategoricalTable rows(const std::vector<std::size_t>& picks) const {
        std::vector<std::vector<int>> c(columns_.size());
        for (std::size_t k = 0; k < columns_.size(); ++k) {
            c[k].reserve(picks.size());
            for (auto i : picks) c[k].push_back(columns_[k].at(i));
        }
        return recode(names_, labels_, std::move(c));
    }

    /// Builds a table from codes over declared level lists, keeping only the
    /// levels that occur and renumbering them in first-appearance order.
    static CategoricalTable from_declared(std::vector<std::string> names,
                                          const std::vector<std::vector<std::string>>& declared_labels,
                                          std::vector<std::vector<int>> columns) {
        return recode(std::move(names), declared_labels, std::move(columns));
    }

private:
    static CategoricalTable recode(std::vector<std::string> names, const std::vector<std::vector<std::string>>& labels,
                                   std::vector<std::vector<int>> columns) {
        std::vector<std::vector<std::string>> new_labels(labels.size());
        for (std::size_t k = 0; k < columns.size(); ++k) {
            std::vector<int> remap(labels[k].size(), -1);
            for (int& c : columns[k]) {
                if (remap[c] < 0) {
                    remap[c] = static_cast<int>(new_labels[k].size());
                    new_labels[k].push_back(labels[k][c]);
                }
                c = remap[c];
            }
        }
        return CategoricalTable(std::move(names), std::move(new_labels), std::move(columns));
    }

    std::vector<std::string> names_;
    std::vector<std::vector<std::string>> labels_;
    std::vector<std::vector<int>> columns_;
    std::size_t n_samples_ = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace detail

/// Reads comma-separated text: a header row of names, then one sample per row.
/// Level codes are assigned in first-appearance order per column.
inline CategoricalTable load_table(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        names = detail::split(line, ',');
        break;
    }
    if (names.empty()) throw ParseError("missing header row");
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) throw ParseError("empty variable name in header", line_no);
        if (!seen.insert(n).second) throw ParseError("duplicate variable name '" + n + "'", line_no);
    }
    if (names.size() > static_cast<std::size_t>(VertexSet::capacity))
        throw ParseError("more than 64 variables", line_no);

    const std::size_t m = names.size();
    std::vector<std::vector<std::string>> labels(m);
    std::vector<std::unordered_map<std::string, int>> lookup(m);
    std::vector<std::vector<int>> columns(m);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split(line, ',');
        ++row;
        if (fields.size() != m)
            throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(m),
                             line_no);
        for (std::size_t k = 0; k < m; ++k) {
            if (fields[k].empty())
                throw ParseError("missing value for '" + names[k] + "' in row " + std::to_string(row), line_no);
            auto [it, inserted] = lookup[k].try_emplace(fields[k], static_cast<int>(labels[k].size()));
            if (inserted) labels[k].push_back(fields[k]);
            columns[k].push_back(it->second);
        }
    }
    if (row == 0) throw ParseError("no data rows", line_no);
    return CategoricalTable(std::move(names), std::move(labels), std::move(columns));
}

/// Writes the table back in the same comma-separated format, using level labels.
inline void write_table(std::ostream& out, const CategoricalTable& t) {
    for (int k = 0; k < t.n_vars(); ++k) out << (k ? "," : "") << t.name(k);
    out << '\n';
    for (std::size_t i = 0; i < t.n_samples(); ++i) {
        for (int k = 0; k < t.n_vars(); ++k) out << (k ? "," : "") << t.labels(k)[t.code(i, k)];
        out << '\n';
    }
}

/// Joint occurrence counts over a variable subset; zero cells are omitted.
struct CountVector {
    std::vector<int> subset;                   // variable indices, ascending
    std::map<std::vector<int>, long> cells;    // configuration -> count

    long total() const {
        long s = 0;
        for (const auto& [cfg, n] : cells) s += n;
        return s;
    }
};

namespace detail {

// Assigns every row a dense id of its joint configuration over `vars`.
// Returns the number of distinct configurations.
inline std::size_t joint_ids(const CategoricalTable& t, const std::vector<int>& vars, std::vector<std::uint64_t>& ids) {
    const std::size_t n = t.n_samples();
    ids.assign(n, 0);
    std::uint64_t radix = 1;
    auto compress = [&] {
        std::vector<std::uint64_t> sorted(ids);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (auto& id : ids) id = std::lower_bound(sorted.begin(), sorted.end(), id) - sorted.begin();
        radix = sorted.size();
    };
    for (int k : vars) {
        const auto r = static_cast<std::uint64_t>(t.levels(k));
        if (radix > (std::uint64_t{1} << 62) / r) compress();
        const auto& col = t.column(k);
        for (std::size_t i = 0; i < n; ++i) ids[i] = ids[i] * r + static_cast<std::uint64_t>(col[i]);
        radix *= r;
    }
    compress();
    return radix;
}

}  // namespace detail

/// Non-zero joint cell counts over `subset`, sorted ascending. The empty
/// subset yields the single cell {N}.
inline std::vector<long> cell_counts(const CategoricalTable& t, VertexSet subset) {
    if (subset.empty()) return {static_cast<long>(t.n_samples())};
    std::vector<std::uint64_t> ids;
    const auto groups = detail::joint_ids(t, subset.members(), ids);
    std::vector<long> c(groups, 0);
    for (auto id : ids) ++c[id];
    std::sort(c.begin(), c.end());
    return c;
}

inline CountVector counts(const CategoricalTable& t, VertexSet subset) {
    if (subset.empty()) throw ContractError("counts() needs a nonempty subset");
    if (!subset.is_subset_of(t.all())) throw ContractError("subset index outside the table");
    CountVector cv;
    cv.subset = subset.members();
    std::vector<int> cfg(cv.subset.size());
    for (std::size_t i = 0; i < t.n_samples(); ++i) {
        for (std::size_t j = 0; j < cfg.size(); ++j) cfg[j] = t.code(i, cv.subset[j]);
        ++cv.cells[cfg];
    }
    return cv;
}

}  // namespace ancestral

#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ancestral/errors.hpp"
#include "ancestral/graph.hpp"
#include "ancestral/rng.hpp"
#include "ancestral/table.hpp"

namespace ancestral {

/// Bayesian network over categorical variables. `cpt[v]` holds one
/// probability row per parent configuration, rows in row-major order of the
/// parents' levels (first parent varies slowest).
struct DiscreteNetwork {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> levels;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<std::vector<double>>> cpt;

    int size() const { return static_cast<int>(names.size()); }

    int index_of(const std::string& name) const {
        auto it = std::find(names.begin(), names.end(), name);
        return it == names.end() ? -1 : static_cast<int>(it - names.begin());
    }

    int row_count(int v) const {
        int rows = 1;
        for (int p : parents[v]) rows *= static_cast<int>(levels[p].size());
        return rows;
    }

    /// Row index of a parent configuration given every variable's level.
    template <typename Levels>
    int row_of(int v, const Levels& assignment) const {
        int row = 0;
        for (int p : parents[v]) row = row * static_cast<int>(levels[p].size()) + assignment[p];
        return row;
    }

    MixedGraph dag() const {
        MixedGraph g(names);
        for (int v = 0; v < size(); ++v)
            for (int p : parents[v]) g.add_directed(p, v);
        return g;
    }

    /// Parents before children; ties broken by declaration order.
    std::vector<int> topological_order() const {
        const int n = size();
        std::vector<int> indegree(n, 0), order;
        for (int v = 0; v < n; ++v) indegree[v] = static_cast<int>(parents[v].size());
        std::vector<bool> done(n, false);
        while (static_cast<int>(order.size()) < n) {
            int pick = -1;
            for (int v = 0; v < n && pick < 0; ++v)
                if (!done[v] && indegree[v] == 0) pick = v;
            if (pick < 0) throw ContractError("network parent structure is cyclic");
            done[pick] = true;
            order.push_back(pick);
            for (int c = 0; c < n; ++c)
                if (std::find(parents[c].begin(), parents[c].end(), pick) != parents[c].end()) --indegree[c];
        }
        return order;
    }
};

namespace detail {

inline std::vector<double> parse_probabilities(const std::string& text, std::size_t line_no) {
    std::istringstream is(text);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t used = 0;
            const double p = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(p);
        } catch (const std::exception&) {
            throw ParseError("not a probability: '" + tok + "'", line_no);
        }
    }
    return out;
}

}  // namespace detail

/// Parses the network text format:
///
///     var A: a0,a1
///     var B: b0,b1
///     cpt A: 0.5 0.5
///     cpt B | A: 0.9 0.1 ; 0.2 0.8
///
/// `#` starts a comment line.
inline DiscreteNetwork parse_network(std::istream& in, double tolerance = 1e-6) {
    DiscreteNetwork net;
    struct CptLine {
        std::string child;
        std::vector<std::string> parents;
        std::string body;
        std::size_t line;
    };
    std::vector<CptLine> cpts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto colon = t.find(':');
        if (colon == std::string::npos) throw ParseError("expected ':'", line_no);
        const std::string head = detail::trim(t.substr(0, colon));
        const std::string body = detail::trim(t.substr(colon + 1));
        if (head.rfind("var ", 0) == 0) {
            const std::string name = detail::trim(head.substr(4));
            if (name.empty()) throw ParseError("missing variable name", line_no);
            if (net.index_of(name) >= 0) throw ParseError("variable '" + name + "' declared twice", line_no);
            auto lv = detail::split(body, ',');
            if (lv.empty() || (lv.size() == 1 && lv[0].empty()))
                throw ParseError("variable '" + name + "' has no levels", line_no);
            for (std::size_t i = 0; i < lv.size(); ++i) {
                if (lv[i].empty()) throw ParseError("empty level label", line_no);
                for (std::size_t j = 0; j < i; ++j)
                    if (lv[i] == lv[j]) throw ParseError("duplicate level '" + lv[i] + "'", line_no);
            }
            net.names.push_back(name);
            net.levels.push_back(std::move(lv));
        } else if (head.rfind("cpt ", 0) == 0) {
            CptLine c;
            c.line = line_no;
            c.body = body;
            const std::string rest = head.substr(4);
            const auto bar = rest.find('|');
            c.child = detail::trim(rest.substr(0, bar));
            if (bar != std::string::npos) {
                c.parents = detail::split(detail::trim(rest.substr(bar + 1)), ',');
                for (const auto& p : c.parents)
                    if (p.empty()) throw ParseError("empty parent name", line_no);
            }
            cpts.push_back(std::move(c));
        } else {
            throw ParseError("expected 'var' or 'cpt'", line_no);
        }
    }
    const int n = net.size();
    if (n == 0) throw ParseError("network declares no variables");
    net.parents.assign(n, {});
    net.cpt.assign(n, {});
    std::vector<bool> has_cpt(n, false);
    for (const auto& c : cpts) {
        const int v = net.index_of(c.child);
        if (v < 0) throw ParseError("cpt for undeclared variable '" + c.child + "'", c.line);
        if (has_cpt[v]) throw ParseError("second cpt for '" + c.child + "'", c.line);
        has_cpt[v] = true;
        for (const auto& p : c.parents) {
            const int pi = net.index_of(p);
            if (pi < 0) throw ParseError("undeclared parent '" + p + "'", c.line);
            if (pi == v) throw ParseError("variable '" + p + "' listed as its own parent", c.line);
            if (std::find(net.parents[v].begin(), net.parents[v].end(), pi) != net.parents[v].end())
                throw ParseError("parent '" + p + "' listed twice", c.line);
            net.parents[v].push_back(pi);
        }
        const auto rows = detail::split(c.body, ';');
        const int expected_rows = net.row_count(v);
        if (static_cast<int>(rows.size()) != expected_rows)
            throw ParseError("cpt for '" + c.child + "' has " + std::to_string(rows.size()) + " rows, expected " +
                                 std::to_string(expected_rows),
                             c.line);
        const std::size_t r = net.levels[v].size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto probs = detail::parse_probabilities(rows[i], c.line);
            const std::string where = "cpt '" + c.child + "' row " + std::to_string(i + 1);
            if (probs.size() != r)
                throw ParseError(where + " has " + std::to_string(probs.size()) + " entries, expected " + std::to_string(r),
                                 c.line);
            double sum = 0.0;
            for (double p : probs) {
                if (!(p >= 0.0)) throw ParseError(where + " has a negative entry", c.line);
                sum += p;
            }
            if (std::abs(sum - 1.0) > tolerance)
                throw ParseError(where + " sums to " + std::to_string(sum), c.line);
            for (double& p : probs) p /= sum;
            net.cpt[v].push_back(std::move(probs));
        }
    }
    for (int v = 0; v < n; ++v)
        if (!has_cpt[v]) throw ParseError("variable '" + net.names[v] + "' has no cpt");
    try {
        net.topological_order();
    } catch (const ContractError&) {
        throw ParseError("parent structure is cyclic");
    }
    return net;
}

inline void write_network(std::ostream& out, const DiscreteNetwork& net) {
    for (int v = 0; v < net.size(); ++v) {
        out << "var " << net.names[v] << ": ";
        for (std::size_t k = 0; k < net.levels[v].size(); ++k) out << (k ? "," : "") << net.levels[v][k];
        out << '\n';
    }
    out << std::setprecision(17);
    for (int v = 0; v < net.size(); ++v) {
        out << "cpt " << net.names[v];
        if (!net.parents[v].empty()) {
            out << " |";
            for (std::size_t k = 0; k < net.parents[v].size(); ++k)
                out << (k ? "," : " ") << net.names[net.parents[v][k]];
        }
        out << ':';
        for (std::size_t row = 0; row < net.cpt[v].size(); ++row) {
            if (row) out << " ;";
            for (double p : net.cpt[v][row]) out << ' ' << p;
        }
        out << '\n';
    }
}

/// Forward sampling in topological order. Columns follow declaration order;
/// levels that never occur are dropped from the table.
inline CategoricalTable sample(const DiscreteNetwork& net, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ContractError("sample size must be at least 1");
    Rng rng(seed);
    const auto order = net.topological_order();
    std::vector<std::vector<int>> columns(net.size(), std::vector<int>(n));
    std::vector<int> row(net.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (int v : order) {
            const auto& probs = net.cpt[v][net.row_of(v, row)];
            const double u = rng.uniform();
            double acc = 0.0;
            int level = static_cast<int>(probs.size()) - 1;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                acc += probs[k];
                if (u < acc) {
                    level = static_cast<int>(k);
                    break;
                }
            }
            while (probs[level] == 0.0 && level > 0) --level;
            row[v] = level;
            columns[v][i] = level;
        }
    }
    return CategoricalTable::from_declared(net.names, net.levels, std::move(columns));
}

/// Drops the named columns, keeping the survivors' order.
inline CategoricalTable hide(const CategoricalTable& table, const std::vector<std::string>& hidden) {
    VertexSet drop;
    for (const auto& h : hidden) {
        const int k = table.index_of(h);
        if (k < 0) throw ContractError("cannot hide unknown variable '" + h + "'");
        drop.insert(k);
    }
    std::vector<int> keep;
    for (int k = 0; k < table.n_vars(); ++k)
        if (!drop.contains(k)) keep.push_back(k);
    if (keep.empty()) throw ContractError("hiding every variable leaves nothing to learn from");
    return table.select(keep);
}

}  // namespace ancestral

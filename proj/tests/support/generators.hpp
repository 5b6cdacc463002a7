#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ancestral.hpp"

namespace gen {

using ancestral::MixedGraph;
using ancestral::Rng;

inline std::vector<std::string> names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("V" + std::to_string(i));
    return out;
}

/// Random DAG whose edges follow the vertex order.
inline MixedGraph random_dag(int n, double p, Rng& rng) {
    MixedGraph g(names(n));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (rng.uniform() < p) g.add_directed(a, b);
    return g;
}

/// Network on `dag` (edges must follow vertex order) with random CPT rows.
inline ancestral::DiscreteNetwork random_network(const MixedGraph& dag, int min_levels, int max_levels, Rng& rng) {
    ancestral::DiscreteNetwork net;
    const int n = dag.n();
    for (int v = 0; v < n; ++v) {
        net.names.push_back(dag.name(v));
        const int r = min_levels + static_cast<int>(rng.below(max_levels - min_levels + 1));
        std::vector<std::string> lv;
        for (int k = 0; k < r; ++k) lv.push_back("l" + std::to_string(k));
        net.levels.push_back(lv);
        net.parents.push_back(dag.parents(v).members());
    }
    net.cpt.resize(n);
    for (int v = 0; v < n; ++v) {
        for (int row = 0; row < net.row_count(v); ++row) {
            std::vector<double> p(net.levels[v].size());
            double s = 0.0;
            for (auto& x : p) s += (x = 0.05 + rng.uniform());
            for (auto& x : p) x /= s;
            net.cpt[v].push_back(p);
        }
    }
    return net;
}

/// Uniform random codes, r levels each.
inline ancestral::CategoricalTable random_table(int m, std::size_t n, int max_levels, Rng& rng) {
    std::vector<std::vector<std::string>> labels;
    std::vector<std::vector<int>> cols(m, std::vector<int>(n));
    for (int k = 0; k < m; ++k) {
        const int r = 2 + static_cast<int>(rng.below(max_levels - 1));
        std::vector<std::string> lv;
        for (int j = 0; j < r; ++j) lv.push_back(std::to_string(j));
        labels.push_back(lv);
        for (auto& c : cols[k]) c = static_cast<int>(rng.below(r));
    }
    return ancestral::CategoricalTable::from_declared(names(m), labels, cols);
}

/// Calls f on every ancestral graph with directed and bidirected edges over n vertices.
inline void for_each_ancestral(int n, const std::function<void(const MixedGraph&)>& f) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    std::vector<int> digit(pairs.size(), 0);
    while (true) {
        MixedGraph g(names(n));
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            auto [a, b] = pairs[i];
            if (digit[i] == 1) g.add_directed(a, b);
            if (digit[i] == 2) g.add_directed(b, a);
            if (digit[i] == 3) g.add_bidirected(a, b);
        }
        if (ancestral::is_ancestral(g)) f(g);
        std::size_t i = 0;
        while (i < digit.size() && digit[i] == 3) digit[i++] = 0;
        if (i == digit.size()) break;
        ++digit[i];
    }
}

/// Random ancestral graph: random DAG over a random vertex order, then a
/// fraction of edges turned bidirected where that keeps the graph ancestral.
inline MixedGraph random_ancestral(int n, double p, double bidirected, Rng& rng) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    MixedGraph g(names(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) g.add_directed(order[i], order[j]);
    for (const auto& e : g.edges()) {
        if (rng.uniform() >= bidirected) continue;
        MixedGraph trial = g;
        trial.set_edge(e.a, e.b, ancestral::Mark::Arrow, ancestral::Mark::Arrow);
        if (ancestral::is_ancestral(trial)) g = trial;
    }
    return g;
}

}  // namespace gen

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ancestral/errors.hpp"
#include "ancestral/graph.hpp"
#include "ancestral/separation.hpp"
#include "ancestral/vertex_set.hpp"

namespace ancestral {

/// No two non-adjacent vertices are joined by a collider path through their
/// own ancestors (i.e. no inducing path), so every missing edge is a separation.
inline bool is_maximal(const MixedGraph& g) {
    for (int a = 0; a < g.n(); ++a)
        for (int b = a + 1; b < g.n(); ++b)
            if (!g.adjacent(a, b) && !is_separated(g, {a, b, VertexSet{}, Criterion::ac})) return false;
    return true;
}

/// Maximal ancestral graph over `observed` implied by a DAG whose other
/// vertices are latent. Vertex order and names follow the DAG.
inline MixedGraph latent_project(const MixedGraph& dag, VertexSet observed) {
    if (observed.empty()) throw ContractError("latent projection needs at least one observed vertex");
    if (!observed.is_subset_of(dag.vertices())) throw ContractError("observed set outside the graph");
    for (const auto& e : dag.edges())
        if (!((e.at_a == Mark::Tail && e.at_b == Mark::Arrow) || (e.at_a == Mark::Arrow && e.at_b == Mark::Tail)))
            throw ContractError("latent projection expects a purely directed graph");
    if (!validate_ancestral(dag).empty()) throw ContractError("latent projection expects an acyclic graph");

    const auto obs = observed.members();
    std::vector<std::string> names;
    for (int v : obs) names.push_back(dag.name(v));
    MixedGraph mag(names);
    for (std::size_t i = 0; i < obs.size(); ++i)
        for (std::size_t j = i + 1; j < obs.size(); ++j) {
            const int x = obs[i], y = obs[j];
            // Non-adjacent pairs are separated by their observed ancestors.
            const VertexSet sep = (ancestors(dag, VertexSet{x, y}) & observed).without(x).without(y);
            if (is_separated(dag, {x, y, sep, Criterion::m})) continue;
            const VertexSet anc_y = ancestors(dag, VertexSet{y});
            const VertexSet anc_x = ancestors(dag, VertexSet{x});
            const int a = static_cast<int>(i), b = static_cast<int>(j);
            if (anc_y.contains(x))
                mag.add_directed(a, b);
            else if (anc_x.contains(y))
                mag.add_directed(b, a);
            else
                mag.add_bidirected(a, b);
        }
    return mag;
}

struct PagOptions {
    int max_edges = 12;
};

/// Per-end consensus over every ancestral graph with the same skeleton that is
/// Markov equivalent to `mag`: marks shared by the whole class are kept, the
/// others become circles. Brute force over 3^edges orientations.
inline MixedGraph pag_oracle(const MixedGraph& mag, PagOptions options = {}) {
    if (mag.has_circles() || mag.has_undirected()) throw ContractError("pag_oracle expects a MAG without circle or undirected marks");
    if (!validate_ancestral(mag).empty()) throw ContractError("pag_oracle expects a valid ancestral graph");
    if (!is_maximal(mag)) throw ContractError("pag_oracle expects a maximal ancestral graph");
    const auto edges = mag.edges();
    if (static_cast<int>(edges.size()) > options.max_edges)
        throw ResourceError("pag_oracle is limited to " + std::to_string(options.max_edges) + " edges, graph has " +
                            std::to_string(edges.size()));

    constexpr std::pair<Mark, Mark> choices[3] = {
        {Mark::Tail, Mark::Arrow}, {Mark::Arrow, Mark::Tail}, {Mark::Arrow, Mark::Arrow}};
    const std::size_t m = edges.size();
    // Bit 0: some member has a tail at this end; bit 1: some member has an arrow.
    std::vector<std::uint8_t> seen_a(m, 0), seen_b(m, 0);
    std::vector<int> digit(m, 0);
    MixedGraph candidate = mag;
    while (true) {
        for (std::size_t i = 0; i < m; ++i)
            candidate.set_edge(edges[i].a, edges[i].b, choices[digit[i]].first, choices[digit[i]].second);
        if (validate_ancestral(candidate).empty() && markov_equivalent(candidate, mag)) {
            for (std::size_t i = 0; i < m; ++i) {
                seen_a[i] |= choices[digit[i]].first == Mark::Tail ? 1 : 2;
                seen_b[i] |= choices[digit[i]].second == Mark::Tail ? 1 : 2;
            }
        }
        std::size_t i = 0;
        while (i < m && digit[i] == 2) digit[i++] = 0;
        if (i == m) break;
        ++digit[i];
    }
    auto consensus = [](std::uint8_t seen) {
        return seen == 1 ? Mark::Tail : seen == 2 ? Mark::Arrow : Mark::Circle;
    };
    MixedGraph pag(mag.names());
    for (std::size_t i = 0; i < m; ++i) pag.add_edge(edges[i].a, edges[i].b, consensus(seen_a[i]), consensus(seen_b[i]));
    return pag;
}

}  // namespace ancestral

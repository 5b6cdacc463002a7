#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ancestral/errors.hpp"
#include "ancestral/vertex_set.hpp"

namespace ancestral {

/// End mark of an edge at one of its vertices.
enum class Mark : std::uint8_t { Tail, Arrow, Circle };

/// Edge {a, b} with a < b and the marks at each end.
struct Edge {
    int a = 0;
    int b = 0;
    Mark at_a = Mark::Tail;
    Mark at_b = Mark::Tail;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Graph over up to 64 named vertices with at most one edge per pair. Each edge
/// carries a mark at both ends: tail-arrow is directed, arrow-arrow bidirected,
/// tail-tail undirected. Circle marks only appear in equivalence-class summaries.
class MixedGraph {
public:
    MixedGraph() = default;

    explicit MixedGraph(int n) {
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("V" + std::to_string(i));
        *this = MixedGraph(std::move(names));
    }

    explicit MixedGraph(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.size() > static_cast<std::size_t>(VertexSet::capacity))
            throw ContractError("graphs are limited to 64 vertices");
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j]) throw ContractError("duplicate vertex name '" + names_[i] + "'");
        ends_.assign(names_.size() * names_.size(), none);
    }

    int n() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int v) const { return names_.at(v); }
    VertexSet vertices() const { return VertexSet::range(n()); }

    int index_of(const std::string& name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
    }

    bool adjacent(int a, int b) const { return a != b && ends_[idx(a, b)] != none; }

    /// Mark at `at` on the edge between `at` and `other`.
    std::optional<Mark> mark_at(int at, int other) const {
        const auto m = ends_[idx(other, at)];
        if (m == none) return std::nullopt;
        return static_cast<Mark>(m);
    }

    /// Inserts or replaces the edge between a and b.
    void set_edge(int a, int b, Mark at_a, Mark at_b) {
        if (a == b) throw ContractError("self-loops are not allowed");
        ends_[idx(b, a)] = static_cast<std::int8_t>(at_a);
        ends_[idx(a, b)] = static_cast<std::int8_t>(at_b);
    }

    /// Like set_edge, but refuses a second edge between the same pair.
    void add_edge(int a, int b, Mark at_a, Mark at_b) {
        if (adjacent(a, b))
            throw ContractError("vertices '" + name(a) + "' and '" + name(b) + "' already share an edge");
        set_edge(a, b, at_a, at_b);
    }
    void add_directed(int from, int to) { add_edge(from, to, Mark::Tail, Mark::Arrow); }
    void add_bidirected(int a, int b) { add_edge(a, b, Mark::Arrow, Mark::Arrow); }
    void add_undirected(int a, int b) { add_edge(a, b, Mark::Tail, Mark::Tail); }

    void remove_edge(int a, int b) {
        ends_[idx(a, b)] = none;
        ends_[idx(b, a)] = none;
    }

    bool is_directed(int from, int to) const {
        return mark_at(from, to) == Mark::Tail && mark_at(to, from) == Mark::Arrow;
    }
    bool is_bidirected(int a, int b) const {
        return mark_at(a, b) == Mark::Arrow && mark_at(b, a) == Mark::Arrow;
    }
    bool is_undirected(int a, int b) const {
        return mark_at(a, b) == Mark::Tail && mark_at(b, a) == Mark::Tail;
    }

    VertexSet adjacent_set(int v) const {
        return collect(v, [&](int u) { return adjacent(u, v); });
    }
    VertexSet parents(int v) const {
        return collect(v, [&](int u) { return is_directed(u, v); });
    }
    VertexSet children(int v) const {
        return collect(v, [&](int u) { return is_directed(v, u); });
    }
    VertexSet spouses(int v) const {
        return collect(v, [&](int u) { return is_bidirected(u, v); });
    }
    VertexSet undirected_neighbors(int v) const {
        return collect(v, [&](int u) { return is_undirected(u, v); });
    }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (int a = 0; a < n(); ++a)
            for (int b = a + 1; b < n(); ++b)
                if (adjacent(a, b)) out.push_back(Edge{a, b, *mark_at(a, b), *mark_at(b, a)});
        return out;
    }

    int edge_count() const {
        int c = 0;
        for (int a = 0; a < n(); ++a)
            for (int b = a + 1; b < n(); ++b) c += adjacent(a, b);
        return c;
    }

    bool has_undirected() const {
        for (const auto& e : edges())
            if (e.at_a == Mark::Tail && e.at_b == Mark::Tail) return true;
        return false;
    }
    bool has_circles() const {
        for (const auto& e : edges())
            if (e.at_a == Mark::Circle || e.at_b == Mark::Circle) return true;
        return false;
    }

    /// Same vertices and edges, marks ignored.
    MixedGraph skeleton() const {
        MixedGraph g(names_);
        for (const auto& e : edges()) g.add_undirected(e.a, e.b);
        return g;
    }

    /// Order-independent hash of the edge/mark multiset.
    std::uint64_t fingerprint() const {
        std::uint64_t h = 0;
        for (const auto& e : edges()) {
            std::uint64_t x = (static_cast<std::uint64_t>(e.a) << 40) ^ (static_cast<std::uint64_t>(e.b) << 16) ^
                              (static_cast<std::uint64_t>(e.at_a) << 4) ^ static_cast<std::uint64_t>(e.at_b);
            x += 0x9e3779b97f4a7c15ull;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
            h += x ^ (x >> 31);
        }
        return h;
    }

    friend bool operator==(const MixedGraph& a, const MixedGraph& b) {
        return a.names_ == b.names_ && a.ends_ == b.ends_;
    }

private:
    static constexpr std::int8_t none = -1;

    std::size_t idx(int from, int to) const {
        if (from < 0 || to < 0 || from >= n() || to >= n())
            throw ContractError("vertex index out of range");
        return static_cast<std::size_t>(from) * names_.size() + static_cast<std::size_t>(to);
    }

    template <typename Pred>
    VertexSet collect(int v, Pred pred) const {
        VertexSet s;
        for (int u = 0; u < n(); ++u)
            if (u != v && pred(u)) s.insert(u);
        return s;
    }

    std::vector<std::string> names_;
    std::vector<std::int8_t> ends_;  // ends_[from * n + to] = mark at `to`
};

/// Reflexive ancestor set: every vertex with a directed path into a target,
/// targets included. Bidirected and undirected edges carry no ancestry.
inline VertexSet ancestors(const MixedGraph& g, VertexSet targets) {
    VertexSet result = targets & g.vertices();
    std::vector<int> stack = result.members();
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int p : g.parents(v).members())
            if (!result.contains(p)) {
                result.insert(p);
                stack.push_back(p);
            }
    }
    return result;
}

/// Strict ancestors of every vertex, by transitive closure over directed edges.
inline std::vector<VertexSet> ancestor_table(const MixedGraph& g) {
    const int n = g.n();
    std::vector<VertexSet> anc(n);
    for (int v = 0; v < n; ++v) anc[v] = g.parents(v);
    for (int k = 0; k < n; ++k)
        for (int v = 0; v < n; ++v)
            if (anc[v].contains(k)) anc[v] |= anc[k];
    return anc;
}

enum class ViolationKind { DirectedCycle, AlmostDirectedCycle, CircleMark };

struct Violation {
    ViolationKind kind;
    int a;  // for cycles: a is an ancestor of b while the edge closes the cycle
    int b;
};

inline std::string describe(const MixedGraph& g, const Violation& v) {
    switch (v.kind) {
        case ViolationKind::DirectedCycle:
            return "directed cycle: " + g.name(v.a) + " is an ancestor of " + g.name(v.b) + " and " + g.name(v.b) +
                   " -> " + g.name(v.a);
        case ViolationKind::AlmostDirectedCycle:
            return "almost directed cycle: " + g.name(v.a) + " is an ancestor of " + g.name(v.b) + " and " +
                   g.name(v.a) + " <-> " + g.name(v.b);
        case ViolationKind::CircleMark:
            return "unresolved circle mark on " + g.name(v.a) + " - " + g.name(v.b);
    }
    return {};
}

/// Directed cycles (X in An(Y) with Y -> X) and almost directed cycles
/// (X in An(Y) with X <-> Y). Empty iff the graph is ancestral.
inline std::vector<Violation> validate_ancestral(const MixedGraph& g) {
    std::vector<Violation> out;
    const auto anc = ancestor_table(g);
    for (const auto& e : g.edges()) {
        if (e.at_a == Mark::Circle || e.at_b == Mark::Circle) {
            out.push_back({ViolationKind::CircleMark, e.a, e.b});
            continue;
        }
        if (e.at_a == Mark::Tail && e.at_b == Mark::Arrow) {  // a -> b
            if (anc[e.a].contains(e.b)) out.push_back({ViolationKind::DirectedCycle, e.b, e.a});
        } else if (e.at_a == Mark::Arrow && e.at_b == Mark::Tail) {  // b -> a
            if (anc[e.b].contains(e.a)) out.push_back({ViolationKind::DirectedCycle, e.a, e.b});
        } else if (e.at_a == Mark::Arrow && e.at_b == Mark::Arrow) {
            if (anc[e.b].contains(e.a)) out.push_back({ViolationKind::AlmostDirectedCycle, e.a, e.b});
            if (anc[e.a].contains(e.b)) out.push_back({ViolationKind::AlmostDirectedCycle, e.b, e.a});
        }
    }
    return out;
}

inline bool is_ancestral(const MixedGraph& g) { return validate_ancestral(g).empty(); }

}  // namespace ancestral

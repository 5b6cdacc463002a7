#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ancestral/errors.hpp"
#include "ancestral/graph.hpp"
#include "ancestral/vertex_set.hpp"

namespace ancestral {

/// m: colliders in An(C), x, y outside C.
/// m_prime: colliders in An({x, y} u C), x and y may belong to C.
/// ac: collider paths only, colliders in An({x, y} u C).
enum class Criterion { m, m_prime, ac };

inline std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::m: return "m";
        case Criterion::m_prime: return "m_prime";
        case Criterion::ac: return "ac";
    }
    return {};
}

struct SeparationQuery {
    int x = 0;
    int y = 0;
    VertexSet cond;
    Criterion criterion = Criterion::m;
};

namespace detail {

inline void require_marks_resolved(const MixedGraph& g) {
    if (g.has_circles()) throw ContractError("separation is undefined on graphs with circle marks");
}

inline void check_query(const MixedGraph& g, const SeparationQuery& q) {
    if (q.x == q.y) throw ContractError("separation query needs two distinct vertices");
    if (q.x < 0 || q.y < 0 || q.x >= g.n() || q.y >= g.n()) throw ContractError("query vertex out of range");
    if (!q.cond.is_subset_of(g.vertices())) throw ContractError("conditioning set outside the graph");
    if (q.criterion == Criterion::m && (q.cond.contains(q.x) || q.cond.contains(q.y)))
        throw ContractError("m-separation requires x and y outside the conditioning set");
    require_marks_resolved(g);
}

// Collider path search from x to y whose intermediate vertices lie in `allowed`.
// Returns the intermediate vertices of a shortest such path, or nullopt.
// max_colliders <= 0 means unbounded.
inline std::optional<std::vector<int>> collider_path(const MixedGraph& g, int x, int y, VertexSet allowed,
                                                     int max_colliders) {
    const int n = g.n();
    std::vector<int> pred(n, -2);
    std::vector<int> depth(n, 0);
    std::deque<int> queue;
    for (int z : g.adjacent_set(x).members()) {
        if (z == y || !allowed.contains(z) || g.mark_at(z, x) != Mark::Arrow) continue;
        pred[z] = -1;
        depth[z] = 1;
        queue.push_back(z);
    }
    while (!queue.empty()) {
        const int z = queue.front();
        queue.pop_front();
        if (g.adjacent(z, y) && g.mark_at(z, y) == Mark::Arrow) {
            std::vector<int> path;
            for (int v = z; v >= 0; v = pred[v]) path.push_back(v);
            return std::vector<int>(path.rbegin(), path.rend());
        }
        if (max_colliders > 0 && depth[z] >= max_colliders) continue;
        for (int w : g.spouses(z).members()) {
            if (w == x || w == y || pred[w] != -2 || !allowed.contains(w)) continue;
            pred[w] = z;
            depth[w] = depth[z] + 1;
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

// Reachability over (vertex, arrived-with-arrowhead) states. Walk-based, so a
// returned trace may repeat vertices; callers wanting a simple path search for one.
inline bool m_reachable(const MixedGraph& g, int x, int y, VertexSet cond, VertexSet collider_ok) {
    const int n = g.n();
    std::vector<std::uint8_t> seen(2 * n, 0);
    std::vector<std::pair<int, bool>> stack;
    for (int w : g.adjacent_set(x).members()) {
        const bool arrow = g.mark_at(w, x) == Mark::Arrow;
        if (!seen[2 * w + arrow]) {
            seen[2 * w + arrow] = 1;
            stack.emplace_back(w, arrow);
        }
    }
    while (!stack.empty()) {
        auto [v, arrow_in] = stack.back();
        stack.pop_back();
        if (v == y) return true;
        for (int u : g.adjacent_set(v).members()) {
            const bool collider = arrow_in && g.mark_at(v, u) == Mark::Arrow;
            if (collider ? !collider_ok.contains(v) : cond.contains(v)) continue;
            const bool arrow = g.mark_at(u, v) == Mark::Arrow;
            if (!seen[2 * u + arrow]) {
                seen[2 * u + arrow] = 1;
                stack.emplace_back(u, arrow);
            }
        }
    }
    return false;
}

}  // namespace detail

/// True when no connecting path exists between q.x and q.y given q.cond under
/// the query's criterion.
inline bool is_separated(const MixedGraph& g, const SeparationQuery& q) {
    detail::check_query(g, q);
    switch (q.criterion) {
        case Criterion::m:
            return !detail::m_reachable(g, q.x, q.y, q.cond, ancestors(g, q.cond));
        case Criterion::m_prime:
            return !detail::m_reachable(g, q.x, q.y, q.cond, ancestors(g, q.cond.with(q.x).with(q.y)));
        case Criterion::ac:
            if (g.adjacent(q.x, q.y)) return false;
            return !detail::collider_path(g, q.x, q.y, ancestors(g, q.cond.with(q.x).with(q.y)), 0);
    }
    return true;
}

/// A simple path witnessing connection under the query's criterion, as a vertex
/// sequence from q.x to q.y; nullopt when separated. Depth-first over simple
/// paths, so intended for modest graphs.
inline std::optional<std::vector<int>> connecting_path(const MixedGraph& g, const SeparationQuery& q) {
    detail::check_query(g, q);
    if (is_separated(g, q)) return std::nullopt;
    if (q.criterion == Criterion::ac) {
        if (g.adjacent(q.x, q.y)) return std::vector<int>{q.x, q.y};
        auto mid = detail::collider_path(g, q.x, q.y, ancestors(g, q.cond.with(q.x).with(q.y)), 0);
        std::vector<int> path{q.x};
        path.insert(path.end(), mid->begin(), mid->end());
        path.push_back(q.y);
        return path;
    }
    const VertexSet collider_ok =
        ancestors(g, q.criterion == Criterion::m ? q.cond : q.cond.with(q.x).with(q.y));
    std::vector<int> path{q.x};
    VertexSet on_path{q.x};
    std::optional<std::vector<int>> found;
    auto dfs = [&](auto&& self, int v) -> void {
        if (found) return;
        for (int u : g.adjacent_set(v).members()) {
            if (on_path.contains(u)) continue;
            if (path.size() >= 2) {
                const int prev = path[path.size() - 2];
                const bool collider = g.mark_at(v, prev) == Mark::Arrow && g.mark_at(v, u) == Mark::Arrow;
                if (collider ? !collider_ok.contains(v) : q.cond.contains(v)) continue;
            }
            path.push_back(u);
            on_path.insert(u);
            if (u == q.y)
                found = path;
            else
                self(self, u);
            path.pop_back();
            on_path.erase(u);
            if (found) return;
        }
    };
    dfs(dfs, q.x);
    return found;
}

/// Every pair of `c` is adjacent or joined by a collider path whose
/// intermediate vertices lie in An(c). max_colliders > 0 restricts the
/// collider paths considered to that many intermediate vertices.
inline bool ac_connected(const MixedGraph& g, VertexSet c, int max_colliders = 0) {
    if (c.empty()) throw ContractError("ac_connected needs a nonempty subset");
    detail::require_marks_resolved(g);
    const auto members = c.members();
    if (members.size() == 1) return true;
    const VertexSet anc = ancestors(g, c);
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (g.adjacent(members[i], members[j])) continue;
            if (!detail::collider_path(g, members[i], members[j], anc, max_colliders)) return false;
        }
    return true;
}

struct EnumerationLimits {
    int max_size = 0;                        // <= 0: all sizes
    int max_colliders = 0;                   // <= 0: unbounded collider paths
    std::uint64_t ceiling = 1ull << 24;      // subsets examined
};

namespace detail {

inline std::uint64_t binomial_sum(int n, int k) {
    std::uint64_t total = 0;
    std::uint64_t c = 1;  // C(n, 0)
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<std::uint64_t>(n - i + 1) / static_cast<std::uint64_t>(i);
        total += c;
        if (total > (1ull << 62)) return total;
    }
    return total;
}

// Calls f(subset) for every nonempty subset of size <= max_size, in size then
// lexicographic order; stops early when f returns false.
template <typename F>
void for_each_subset_canonical(int n, int max_size, F&& f) {
    for (int k = 1; k <= max_size; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            if (!f(VertexSet::from(idx))) return;
            int i = k - 1;
            while (i >= 0 && idx[i] == n - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace detail

/// All ac-connected subsets, size then lexicographic order.
inline std::vector<VertexSet> enumerate_ac_connected(const MixedGraph& g, EnumerationLimits limits = {}) {
    detail::require_marks_resolved(g);
    const int n = g.n();
    const int max_size = limits.max_size <= 0 ? n : std::min(limits.max_size, n);
    if (detail::binomial_sum(n, max_size) > limits.ceiling)
        throw ResourceError("ac-connected enumeration over " + std::to_string(n) + " vertices up to size " +
                            std::to_string(max_size) + " exceeds the subset ceiling");
    std::vector<VertexSet> out;
    detail::for_each_subset_canonical(n, max_size, [&](VertexSet s) {
        if (ac_connected(g, s, limits.max_colliders)) out.push_back(s);
        return true;
    });
    return out;
}

inline std::vector<VertexSet> enumerate_ac_connected(const MixedGraph& g, int max_size) {
    EnumerationLimits limits;
    limits.max_size = max_size;
    return enumerate_ac_connected(g, limits);
}

namespace detail {
inline void require_same_vertices(const MixedGraph& a, const MixedGraph& b) {
    if (a.names() != b.names()) throw ContractError("graphs are defined over different vertex sets");
}
}  // namespace detail

/// Subsets ac-connected in exactly one of the two graphs, canonical order.
inline std::vector<VertexSet> ac_family_difference(const MixedGraph& a, const MixedGraph& b,
                                                   std::uint64_t ceiling = 1ull << 24) {
    detail::require_same_vertices(a, b);
    detail::require_marks_resolved(a);
    detail::require_marks_resolved(b);
    if (detail::binomial_sum(a.n(), a.n()) > ceiling) throw ResourceError("graph too large for full comparison");
    std::vector<VertexSet> diff;
    detail::for_each_subset_canonical(a.n(), a.n(), [&](VertexSet s) {
        if (ac_connected(a, s) != ac_connected(b, s)) diff.push_back(s);
        return true;
    });
    return diff;
}

/// Markov equivalence: identical ac-connected families. Stops at the first
/// differing subset.
inline bool markov_equivalent(const MixedGraph& a, const MixedGraph& b, std::uint64_t ceiling = 1ull << 24) {
    detail::require_same_vertices(a, b);
    detail::require_marks_resolved(a);
    detail::require_marks_resolved(b);
    if (detail::binomial_sum(a.n(), a.n()) > ceiling) throw ResourceError("graph too large for full comparison");
    bool same = true;
    detail::for_each_subset_canonical(a.n(), a.n(), [&](VertexSet s) {
        same = ac_connected(a, s) == ac_connected(b, s);
        return same;
    });
    return same;
}

}  // namespace ancestral

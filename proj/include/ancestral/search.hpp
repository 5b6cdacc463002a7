#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "ancestral/errors.hpp"
#include "ancestral/graph.hpp"
#include "ancestral/score.hpp"
#include "ancestral/table.hpp"

namespace ancestral {

/// Selected conditioning set Pa' of every node after Step 1.
using ParentAssignment = std::vector<VertexSet>;

enum class Termination { converged, limit_cycle, max_iterations };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::limit_cycle: return "limit_cycle";
        case Termination::max_iterations: return "max_iterations";
    }
    return "";
}

struct SearchOptions {
    int max_parents = 5;
    int max_iterations = 1000;
    /// Largest conditioning set used to prune the pairwise skeleton; 0 keeps it as is.
    int skeleton_order = 2;
    Penalty penalty = Penalty::fnml;
    int jobs = 1;
    /// Decrements at or below this are treated as ties with the current orientation.
    double tolerance = 1e-10;
    std::optional<MixedGraph> initial;
};

/// Orientation scores of the edge a - b with x = a, y = b, indexed by Orientation.
struct EdgeScores {
    int a = 0;
    int b = 0;
    std::array<double, 3> scores{};
    Orientation current = Orientation::x_to_y;
};

struct Step1Result {
    MixedGraph graph;
    ParentAssignment assignment;
    std::vector<std::pair<int, int>> removed;
    std::vector<std::string> repairs;
};

struct SearchReport {
    MixedGraph graph;
    Termination termination = Termination::converged;
    std::vector<double> trajectory;
    std::vector<std::pair<int, int>> removed;
    std::vector<EdgeScores> edge_scores;
    int iterations = 0;
    /// Non-triangular cycles found and resolved after Step 2.
    std::vector<std::string> repairs;
    std::vector<std::string> warnings;
};

/// Edge X - Y iff the directed orientation score with empty parent sets is
/// negative, i.e. I(X;Y) outweighs the pairwise complexity.
inline MixedGraph init_skeleton(const Scorer& scorer) {
    const auto& t = scorer.table();
    MixedGraph g(t.names());
    for (int x = 0; x < t.n_vars(); ++x)
        for (int y = x + 1; y < t.n_vars(); ++y)
            if (scorer.edge_orientation_score(x, y, {}, {}, Orientation::x_to_y) < 0.0) g.add_undirected(x, y);
    return g;
}

inline MixedGraph init_skeleton(const CategoricalTable& table) { return init_skeleton(Scorer(table)); }

/// Removes X - Y when some set S of current neighbours of X or Y, with
/// 1 <= |S| <= max_order, gives -I(X;Y|S) plus the symmetrized complexity a
/// non-negative score. Each order works on a snapshot of the adjacencies, so
/// the result does not depend on the edge order.
inline MixedGraph prune_skeleton(const Scorer& scorer, MixedGraph g, int max_order,
                                 std::vector<std::pair<int, int>>* removed = nullptr) {
    for (int order = 1; order <= max_order; ++order) {
        std::vector<VertexSet> adj(g.n());
        for (int v = 0; v < g.n(); ++v) adj[v] = g.adjacent_set(v);
        for (const auto& e : g.edges()) {
            const VertexSet pool = (adj[e.a] | adj[e.b]).without(e.a).without(e.b);
            if (pool.size() < order) continue;
            bool separated = false;
            detail::for_each_subset_canonical(pool.size(), order, [&](VertexSet local) {
                if (local.size() != order) return true;
                VertexSet cond;
                const auto members = pool.members();
                for (int k : local.members()) cond.insert(members[k]);
                if (scorer.edge_orientation_score(e.a, e.b, cond, cond, Orientation::bidirected) >= 0.0) {
                    separated = true;
                    return false;
                }
                return true;
            });
            if (separated) {
                g.remove_edge(e.a, e.b);
                if (removed) removed->emplace_back(e.a, e.b);
            }
        }
    }
    return g;
}

namespace detail {

inline VertexSet conditioning(const MixedGraph& g, int v, int other) {
    return (g.parents(v) | g.spouses(v)).without(other);
}

inline Orientation orientation_of(const MixedGraph& g, int x, int y) {
    if (g.is_directed(x, y)) return Orientation::x_to_y;
    if (g.is_directed(y, x)) return Orientation::y_to_x;
    if (g.is_bidirected(x, y)) return Orientation::bidirected;
    throw ContractError("edge " + g.name(x) + " - " + g.name(y) + " is neither directed nor bidirected");
}

inline void orient(MixedGraph& g, int x, int y, Orientation o) {
    switch (o) {
        case Orientation::x_to_y: g.set_edge(x, y, Mark::Tail, Mark::Arrow); break;
        case Orientation::y_to_x: g.set_edge(x, y, Mark::Arrow, Mark::Tail); break;
        case Orientation::bidirected: g.set_edge(x, y, Mark::Arrow, Mark::Arrow); break;
    }
}

/// Directed or almost directed cycle within the triangle {a, b, c}.
inline bool triangle_cycle(const MixedGraph& g, int a, int b, int c) {
    const int t[3] = {a, b, c};
    for (int i = 0; i < 3; ++i) {
        const int u = t[i], v = t[(i + 1) % 3], w = t[(i + 2) % 3];
        if (g.is_directed(u, v) && g.is_directed(v, w) && g.is_directed(w, u)) return true;
        if (g.is_directed(v, u) && g.is_directed(w, v) && g.is_directed(u, w)) return true;
        // u <-> v with u -> w -> v or v -> w -> u
        if (g.is_bidirected(u, v) &&
            ((g.is_directed(u, w) && g.is_directed(w, v)) || (g.is_directed(v, w) && g.is_directed(w, u))))
            return true;
    }
    return false;
}

inline bool creates_triangular_cycle(const MixedGraph& g, int x, int y) {
    const VertexSet common = g.adjacent_set(x) & g.adjacent_set(y);
    for (int z : common.members())
        if (triangle_cycle(g, x, y, z)) return true;
    return false;
}

inline EdgeScores score_edge(const Scorer& scorer, const MixedGraph& g, int x, int y) {
    EdgeScores s;
    s.a = x;
    s.b = y;
    s.current = orientation_of(g, x, y);
    const VertexSet px = conditioning(g, x, y), py = conditioning(g, y, x);
    for (int o = 0; o < 3; ++o) s.scores[o] = scorer.edge_orientation_score(x, y, px, py, static_cast<Orientation>(o));
    return s;
}

/// Scores every edge of `g`. With jobs > 1 edges are split across threads; the
/// result does not depend on the split.
inline std::vector<EdgeScores> score_edges(const Scorer& scorer, const MixedGraph& g, int jobs) {
    const auto edges = g.edges();
    std::vector<EdgeScores> out(edges.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < edges.size(); i += stride) out[i] = score_edge(scorer, g, edges[i].a, edges[i].b);
    };
    const std::size_t threads = std::min<std::size_t>(std::max(jobs, 1), edges.size());
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(work, k, threads);
        for (auto& th : pool) th.join();
    }
    return out;
}

inline double summed_objective(const std::vector<EdgeScores>& scores) {
    CompensatedSum s;
    for (const auto& e : scores) s.add(e.scores[static_cast<int>(e.current)]);
    return s.value();
}

}  // namespace detail

/// Pa' of one node among `candidates` minimizing its node score: exhaustive
/// over all subsets when there are at most `max_parents` candidates, greedy
/// forward-backward otherwise.
inline VertexSet select_parents(const Scorer& scorer, int v, VertexSet candidates, int max_parents,
                                double tolerance = 1e-10) {
    VertexSet best;
    double best_score = scorer.node_score(v, best);
    if (candidates.size() <= max_parents) {
        std::vector<VertexSet> subsets;
        candidates.for_each_subset([&](VertexSet s) { subsets.push_back(s); });
        std::sort(subsets.begin(), subsets.end(), [](VertexSet a, VertexSet b) { return canonical_less(a, b); });
        for (VertexSet s : subsets) {
            const double sc = scorer.node_score(v, s);
            if (sc < best_score - tolerance) {
                best = s;
                best_score = sc;
            }
        }
        return best;
    }
    while (true) {
        std::optional<VertexSet> next;
        double next_score = best_score - tolerance;
        for (int u : candidates.members()) {
            const VertexSet s = best.contains(u) ? best.without(u) : best.with(u);
            const double sc = scorer.node_score(v, s);
            if (sc < next_score) {
                next = s;
                next_score = sc;
            }
        }
        if (!next) return best;
        best = *next;
        best_score = next_score;
    }
}

namespace detail {

/// Turns every directed or almost directed cycle into an ancestral pattern,
/// one closing edge at a time. Each fix only removes ancestor relations, so
/// no new violation appears.
inline std::vector<std::string> repair_cycles(MixedGraph& g) {
    std::vector<std::string> notes;
    while (true) {
        const auto violations = validate_ancestral(g);
        if (violations.empty()) return notes;
        const auto& v = violations.front();
        notes.push_back(describe(g, v) + "; resolved as " + g.name(v.a) + " -> " + g.name(v.b));
        g.set_edge(v.a, v.b, Mark::Tail, Mark::Arrow);
    }
}

}  // namespace detail

/// Node-level selection of Pa' among the neighbours in `g0`, repeated until no
/// selection changes. A neighbour selected by a node gets an arrowhead at that
/// node, so mutual selection gives a bidirected edge; edges selected by
/// neither endpoint are removed. With `keep_marks`, retained edges keep the
/// marks they carry in `g0`. Cycles among the primed orientations are resolved
/// and listed in `repairs`.
inline Step1Result step1(const Scorer& scorer, const MixedGraph& g0, int max_parents = 5, bool keep_marks = false,
                         double tolerance = 1e-10) {
    const int n = scorer.table().n_vars();
    if (g0.n() != n) throw ContractError("initial graph and table disagree on the variable count");
    for (int v = 0; v < n; ++v)
        if (g0.name(v) != scorer.table().name(v))
            throw ContractError("initial graph vertex '" + g0.name(v) + "' does not match column '" +
                                scorer.table().name(v) + "'");
    if (max_parents < 0) throw ContractError("max_parents must be non-negative");

    Step1Result out{MixedGraph(g0.names()), ParentAssignment(n), {}, {}};
    auto& pa = out.assignment;
    for (bool changed = true; changed;) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            const VertexSet s = select_parents(scorer, v, g0.adjacent_set(v), max_parents, tolerance);
            if (s != pa[v]) {
                pa[v] = s;
                changed = true;
            }
        }
    }
    for (const auto& e : g0.edges()) {
        const bool at_b = pa[e.b].contains(e.a), at_a = pa[e.a].contains(e.b);
        if (!at_a && !at_b) {
            out.removed.emplace_back(e.a, e.b);
        } else if (keep_marks) {
            out.graph.set_edge(e.a, e.b, e.at_a, e.at_b);
        } else {
            out.graph.set_edge(e.a, e.b, at_a ? Mark::Arrow : Mark::Tail, at_b ? Mark::Arrow : Mark::Tail);
        }
    }
    out.repairs = detail::repair_cycles(out.graph);
    return out;
}

/// Edge-orientation optimization. Each iteration scores the three
/// orientations of every edge given the current parents and spouses of its
/// endpoints and applies the largest decrement that forms no directed or
/// almost directed triangular cycle. The trajectory starts at the summed node
/// scores of `g1` and drops by each accepted decrement.
inline SearchReport step2(const Scorer& scorer, const MixedGraph& g1, const SearchOptions& options = {}) {
    if (g1.n() != scorer.table().n_vars()) throw ContractError("graph and table disagree on the variable count");
    if (g1.has_undirected() || g1.has_circles())
        throw ContractError("step 2 needs every edge primed as directed or bidirected");
    if (auto v = validate_ancestral(g1); !v.empty())
        throw ContractError("step 2 needs an ancestral starting graph: " + describe(g1, v.front()));

    SearchReport report;
    MixedGraph g = g1;
    {
        CompensatedSum base;
        for (int v = 0; v < g.n(); ++v) base.add(scorer.node_score(v, g.parents(v) | g.spouses(v)));
        report.trajectory.push_back(base.value());
    }
    struct Seen {
        MixedGraph graph;
        double objective;
    };
    std::vector<Seen> history;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_fingerprint;
    auto scores = detail::score_edges(scorer, g, options.jobs);
    history.push_back({g, detail::summed_objective(scores)});
    by_fingerprint[g.fingerprint()].push_back(0);

    report.termination = Termination::converged;
    while (true) {
        if (report.iterations >= options.max_iterations) {
            report.termination = Termination::max_iterations;
            break;
        }
        double best = options.tolerance;
        std::optional<std::pair<std::size_t, Orientation>> pick;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const auto& e = scores[i];
            for (int o = 0; o < 3; ++o) {
                if (o == static_cast<int>(e.current)) continue;
                const double dec = e.scores[static_cast<int>(e.current)] - e.scores[o];
                if (dec <= best) continue;
                MixedGraph trial = g;
                detail::orient(trial, e.a, e.b, static_cast<Orientation>(o));
                if (detail::creates_triangular_cycle(trial, e.a, e.b)) continue;
                best = dec;
                pick = std::make_pair(i, static_cast<Orientation>(o));
            }
        }
        if (!pick) break;
        detail::orient(g, scores[pick->first].a, scores[pick->first].b, pick->second);
        report.trajectory.push_back(report.trajectory.back() - best);
        ++report.iterations;
        scores = detail::score_edges(scorer, g, options.jobs);

        const auto fp = g.fingerprint();
        std::optional<std::size_t> earlier;
        for (std::size_t k : by_fingerprint[fp])
            if (history[k].graph == g) earlier = k;
        if (earlier) {
            report.termination = Termination::limit_cycle;
            std::size_t best_k = *earlier;
            for (std::size_t k = *earlier + 1; k < history.size(); ++k)
                if (history[k].objective < history[best_k].objective) best_k = k;
            g = history[best_k].graph;
            scores = detail::score_edges(scorer, g, options.jobs);
            break;
        }
        by_fingerprint[fp].push_back(history.size());
        history.push_back({g, detail::summed_objective(scores)});
    }

    // A bidirected edge claims a latent cause, so one that a directed
    // orientation matches within tolerance is resolved to that orientation.
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& e : scores) {
            if (e.current != Orientation::bidirected) continue;
            const double bi = e.scores[static_cast<int>(Orientation::bidirected)];
            for (Orientation o : {Orientation::x_to_y, Orientation::y_to_x}) {
                if (e.scores[static_cast<int>(o)] > bi + options.tolerance) continue;
                MixedGraph trial = g;
                detail::orient(trial, e.a, e.b, o);
                if (detail::creates_triangular_cycle(trial, e.a, e.b) || !is_ancestral(trial)) continue;
                g = std::move(trial);
                changed = true;
                break;
            }
            if (changed) break;
        }
        if (changed) scores = detail::score_edges(scorer, g, options.jobs);
    }

    // Cycles longer than a triangle are invisible to the guard.
    report.repairs = detail::repair_cycles(g);
    if (!report.repairs.empty()) scores = detail::score_edges(scorer, g, options.jobs);

    report.graph = std::move(g);
    report.edge_scores = std::move(scores);
    return report;
}

/// Skeleton (built-in or supplied), Step 1, Step 2. Constant columns cannot
/// carry information and are left isolated.
inline SearchReport learn(const CategoricalTable& table, const SearchOptions& options = {}) {
    std::vector<int> active;
    std::vector<std::string> warnings;
    for (int k = 0; k < table.n_vars(); ++k) {
        if (table.levels(k) > 1)
            active.push_back(k);
        else
            warnings.push_back("variable '" + table.name(k) + "' is constant and was left out of the search");
    }
    if (options.initial) {
        const auto& init = *options.initial;
        if (init.names() != table.names())
            throw ContractError("initial graph vertices must match the data columns in order");
    }

    const CategoricalTable sub = table.select(active);
    ScorerOptions so;
    so.penalty = options.penalty;
    const Scorer scorer(sub, so);

    MixedGraph g0(sub.names());
    bool keep_marks = false;
    if (options.initial) {
        const auto& init = *options.initial;
        keep_marks = !init.has_undirected() && !init.has_circles() && is_ancestral(init);
        for (std::size_t i = 0; i < active.size(); ++i)
            for (std::size_t j = i + 1; j < active.size(); ++j)
                if (init.adjacent(active[i], active[j]))
                    g0.set_edge(static_cast<int>(i), static_cast<int>(j), *init.mark_at(active[i], active[j]),
                                *init.mark_at(active[j], active[i]));
    } else {
        g0 = prune_skeleton(scorer, init_skeleton(scorer), options.skeleton_order);
    }

    const auto s1 = step1(scorer, g0, options.max_parents, keep_marks, options.tolerance);
    SearchReport sub_report = step2(scorer, s1.graph, options);

    SearchReport report;
    report.termination = sub_report.termination;
    report.trajectory = std::move(sub_report.trajectory);
    report.iterations = sub_report.iterations;
    report.repairs = std::move(sub_report.repairs);
    report.warnings = std::move(warnings);
    for (const auto& r : s1.repairs) report.warnings.push_back("step 1 priming: " + r);
    report.graph = MixedGraph(table.names());
    for (const auto& e : sub_report.graph.edges()) report.graph.set_edge(active[e.a], active[e.b], e.at_a, e.at_b);
    for (auto [a, b] : s1.removed) report.removed.emplace_back(active[a], active[b]);
    for (auto e : sub_report.edge_scores) {
        e.a = active[e.a];
        e.b = active[e.b];
        report.edge_scores.push_back(e);
    }
    return report;
}

}  // namespace ancestral

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ancestral/complexity.hpp"
#include "ancestral/errors.hpp"
#include "ancestral/graph.hpp"
#include "ancestral/info.hpp"
#include "ancestral/separation.hpp"
#include "ancestral/table.hpp"

namespace ancestral {

enum class Regularizer { none, bic };
enum class PairKind { disconnected, x_to_y, y_to_x };
/// Ordered as the tie-break order used by the search.
enum class Orientation { x_to_y = 0, y_to_x = 1, bidirected = 2 };

inline const char* to_string(Orientation o) {
    switch (o) {
        case Orientation::x_to_y: return "x_to_y";
        case Orientation::y_to_x: return "y_to_x";
        case Orientation::bidirected: return "bidirected";
    }
    return "";
}

/// Complexity term of the local scores.
enum class Penalty { fnml, bic };

struct ScorerOptions {
    Penalty penalty = Penalty::fnml;
    int max_info_subset = InfoEstimator::default_max_subset;
    long exact_threshold = default_exact_threshold;
};

struct GlobalScoreOptions {
    Regularizer regularizer = Regularizer::none;
    int max_subset = 0;       // <= 0: no size bound
    int max_colliders = 0;    // <= 0: unbounded; 2 gives the two-collider approximation
    bool keep_ledger = false;
    std::uint64_t ceiling = 1ull << 24;
};

/// One term of the ac-connected decomposition: `sign * information` is its
/// contribution to the score.
struct LedgerEntry {
    VertexSet subset;
    int sign = 1;
    double information = 0.0;
};

struct GlobalScore {
    double value = 0.0;
    std::size_t subset_count = 0;
    std::vector<LedgerEntry> ledger;
};

/// Node, pair, edge-orientation and global scores over one table, in nats per
/// sample (lower is better). Entropies and complexities are memoized.
class Scorer {
public:
    explicit Scorer(const CategoricalTable& table, ScorerOptions options = {})
        : table_(&table),
          penalty_(options.penalty),
          info_(table, options.max_info_subset),
          complexity_(options.exact_threshold) {}

    const CategoricalTable& table() const { return *table_; }
    const InfoEstimator& info() const { return info_; }
    const ComplexityCache& complexity() const { return complexity_; }
    double n() const { return info_.n(); }

    Penalty penalty() const { return penalty_; }

    /// sum_j log C^{r_x}_{n_j} over the configurations of `cond` realized in the
    /// data. Under BIC: (r_x - 1) q log(N) / 2 with q the product of the levels of `cond`.
    double complexity_sum(int x, VertexSet cond) const {
        if (penalty_ == Penalty::bic) {
            double q = 1.0;
            for (int k : cond.members()) q *= table_->levels(k);
            return 0.5 * (table_->levels(x) - 1) * q * std::log(n());
        }
        return complexity_.sum(table_->levels(x), *info_.cells(cond));
    }

    /// H(X | Pa') + (1/N) sum_j log C^{r_x}_{n_j}
    double node_score(int x, VertexSet pa) const {
        check_var(x);
        if (pa.contains(x)) throw ContractError("a node cannot be its own parent");
        return info_.conditional_entropy(VertexSet{x}, pa) + complexity_sum(x, pa) / n();
    }

    /// Sum of the two node scores, the child's conditioning set gaining the parent.
    double pair_score(int x, int y, VertexSet pa_x, VertexSet pa_y, PairKind kind) const {
        check_pair(x, y, pa_x, pa_y);
        switch (kind) {
            case PairKind::disconnected: return node_score(x, pa_x) + node_score(y, pa_y);
            case PairKind::x_to_y: return node_score(x, pa_x) + node_score(y, pa_y.with(x));
            case PairKind::y_to_x: return node_score(x, pa_x.with(y)) + node_score(y, pa_y);
        }
        return 0.0;
    }

    /// Score of one edge orientation relative to removing the edge:
    /// -I(X;Y | conditioning) plus the averaged complexity of both directions.
    /// With `symmetrize` off, directed orientations keep only the child's
    /// complexity increment (pair score minus disconnected pair score).
    double edge_orientation_score(int x, int y, VertexSet pa_x_not_y, VertexSet pa_y_not_x, Orientation o,
                                  bool symmetrize = true) const {
        check_pair(x, y, pa_x_not_y, pa_y_not_x);
        if (pa_x_not_y.contains(y) || pa_y_not_x.contains(x))
            throw ContractError("edge endpoints must be excluded from both parent sets");
        switch (o) {
            case Orientation::x_to_y: {
                const double cpl = symmetrize ? symmetric_complexity(x, y, pa_x_not_y, pa_y_not_x)
                                              : directed_complexity(y, x, pa_y_not_x);
                return -info_.conditional_mi(x, y, pa_y_not_x) + cpl;
            }
            case Orientation::y_to_x: {
                const double cpl = symmetrize ? symmetric_complexity(x, y, pa_x_not_y, pa_y_not_x)
                                              : directed_complexity(x, y, pa_x_not_y);
                return -info_.conditional_mi(x, y, pa_x_not_y) + cpl;
            }
            case Orientation::bidirected: {
                const VertexSet both = pa_x_not_y | pa_y_not_x;
                return -info_.conditional_mi(x, y, both) + symmetric_complexity(x, y, both, both);
            }
        }
        return 0.0;
    }

    /// Cross-entropy estimate -sum_C (-1)^|C| I(C) over ac-connected subsets C
    /// with plug-in information. BIC replaces I(C) by
    /// I(C) - 1/2 prod_k (1 - r_k) log(N) / N.
    GlobalScore global_score(const MixedGraph& g, const GlobalScoreOptions& opt = {}) const {
        if (g.n() != table_->n_vars()) throw ContractError("graph and table disagree on the variable count");
        if (g.has_undirected())
            throw ContractError("the ac-connected decomposition holds for directed and bidirected edges only; "
                                "resolve undirected edges first");
        if (auto v = validate_ancestral(g); !v.empty())
            throw ContractError("graph is not ancestral: " + describe(g, v.front()));
        EnumerationLimits limits;
        limits.max_size = opt.max_subset;
        limits.max_colliders = opt.max_colliders;
        limits.ceiling = opt.ceiling;
        const auto subsets = enumerate_ac_connected(g, limits);
        GlobalScore out;
        out.subset_count = subsets.size();
        CompensatedSum total;
        const double log_n_over_n = std::log(n()) / n();
        for (VertexSet c : subsets) {
            double i_c = info_.multi_information(c);
            if (opt.regularizer == Regularizer::bic) {
                double prod = 1.0;
                for (int k : c.members()) prod *= 1.0 - table_->levels(k);
                i_c -= 0.5 * prod * log_n_over_n;
            }
            const int sign = (c.size() % 2 == 1) ? 1 : -1;
            total.add(sign * i_c);
            if (opt.keep_ledger) out.ledger.push_back({c, sign, i_c});
        }
        out.value = total.value();
        return out;
    }

    /// sum_i H(X_i | Pa_i) for a directed acyclic graph.
    double dag_conditional_entropy_sum(const MixedGraph& dag) const {
        if (dag.n() != table_->n_vars()) throw ContractError("graph and table disagree on the variable count");
        CompensatedSum s;
        for (int v = 0; v < dag.n(); ++v) {
            if (!dag.spouses(v).empty() || !dag.undirected_neighbors(v).empty())
                throw ContractError("conditional-entropy sum needs a purely directed graph");
            s.add(info_.conditional_entropy(VertexSet{v}, dag.parents(v)));
        }
        if (!validate_ancestral(dag).empty()) throw ContractError("graph has a directed cycle");
        return s.value();
    }

private:
    void check_var(int x) const {
        if (x < 0 || x >= table_->n_vars()) throw ContractError("variable index out of range");
    }
    void check_pair(int x, int y, VertexSet pa_x, VertexSet pa_y) const {
        check_var(x);
        check_var(y);
        if (x == y) throw ContractError("pair scores need two distinct variables");
        if (pa_x.contains(x) || pa_y.contains(y)) throw ContractError("a node cannot be its own parent");
        if (pa_x.contains(y) || pa_y.contains(x)) throw ContractError("pair members must not appear in the parent sets");
    }

    // (1/N) (sum_{pa u other} log C^{r_child} - sum_{pa} log C^{r_child})
    double directed_complexity(int child, int other, VertexSet pa_child) const {
        return (complexity_sum(child, pa_child.with(other)) - complexity_sum(child, pa_child)) / n();
    }

    double symmetric_complexity(int x, int y, VertexSet cond_x, VertexSet cond_y) const {
        const double cx = complexity_sum(x, cond_x.with(y)) - complexity_sum(x, cond_x);
        const double cy = complexity_sum(y, cond_y.with(x)) - complexity_sum(y, cond_y);
        return (cx + cy) / (2.0 * n());
    }

    const CategoricalTable* table_;
    Penalty penalty_;
    InfoEstimator info_;
    ComplexityCache complexity_;
};

}  // namespace ancestral

#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "ancestral/errors.hpp"
#include "ancestral/table.hpp"
#include "ancestral/vertex_set.hpp"

namespace ancestral {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Plug-in entropies and multivariate information of one table, in nats.
///
/// Joint cell counts are memoized per subset and shared by every quantity
/// derived from them. Lookups are safe from concurrent threads; insertions
/// are serialized and idempotent.
class InfoEstimator {
public:
    static constexpr int default_max_subset = 12;

    explicit InfoEstimator(const CategoricalTable& table, int max_subset = default_max_subset)
        : table_(&table), max_subset_(max_subset) {}

    const CategoricalTable& table() const { return *table_; }
    int max_subset() const { return max_subset_; }
    double n() const { return static_cast<double>(table_->n_samples()); }

    /// Sorted non-zero joint cell counts; the empty subset has the single cell N.
    std::shared_ptr<const std::vector<long>> cells(VertexSet s) const {
        check_range(s);
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(s);
            if (it != cache_.end()) return it->second.cells;
        }
        Entry e;
        auto c = std::make_shared<std::vector<long>>(cell_counts(*table_, s));
        const double total = n();
        CompensatedSum acc;
        for (long nj : *c) acc.add(static_cast<double>(nj) * std::log(static_cast<double>(nj)));
        e.entropy = s.empty() ? 0.0 : std::log(total) - acc.value() / total;
        if (e.entropy < 0.0) e.entropy = 0.0;
        e.cells = std::move(c);
        std::unique_lock lock(mutex_);
        auto [it, inserted] = cache_.emplace(s, std::move(e));
        return it->second.cells;
    }

    /// H(S); the empty set has entropy 0 here (used for empty conditioning).
    double joint_entropy(VertexSet s) const {
        check_range(s);
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(s);
            if (it != cache_.end()) return it->second.entropy;
        }
        cells(s);
        std::shared_lock lock(mutex_);
        return cache_.at(s).entropy;
    }

    double entropy(VertexSet s) const {
        if (s.empty()) throw ContractError("entropy() needs a nonempty subset");
        return joint_entropy(s);
    }

    /// H(S | cond) = H(S u cond) - H(cond)
    double conditional_entropy(VertexSet s, VertexSet cond) const {
        return joint_entropy(s | cond) - joint_entropy(cond);
    }

    /// I(V) = -sum_{S subset of V} (-1)^|S| H(S), summed by increasing |S|.
    double multi_information(VertexSet v) const { return conditional_multi_information(v, VertexSet{}); }

    /// I(V | cond) = -sum_{S subset of V} (-1)^|S| H(S | cond).
    double conditional_multi_information(VertexSet v, VertexSet cond) const {
        if (v.empty()) throw ContractError("multivariate information needs a nonempty subset");
        if (v.intersects(cond)) throw ContractError("information subset and conditioning set overlap");
        if (v.size() > max_subset_)
            throw ResourceError("subset of size " + std::to_string(v.size()) + " exceeds the information cap of " +
                                std::to_string(max_subset_));
        check_range(v | cond);
        const int k = v.size();
        std::vector<CompensatedSum> by_size(k + 1);
        const double hc = joint_entropy(cond);
        v.for_each_subset([&](VertexSet s) {
            if (s.empty()) return;
            const double h = joint_entropy(s | cond) - hc;
            by_size[s.size()].add((s.size() % 2 == 1) ? h : -h);
        });
        CompensatedSum total;
        for (int i = 1; i <= k; ++i) total.add(by_size[i].value());
        return total.value();
    }

    /// I(X;Y | A) = H(X,A) + H(Y,A) - H(X,Y,A) - H(A)
    double conditional_mi(int x, int y, VertexSet cond) const {
        if (x == y) throw ContractError("conditional_mi needs two distinct variables");
        if (cond.contains(x) || cond.contains(y)) throw ContractError("conditioning set contains x or y");
        CompensatedSum s;
        s.add(joint_entropy(cond.with(x)));
        s.add(joint_entropy(cond.with(y)));
        s.add(-joint_entropy(cond.with(x).with(y)));
        s.add(-joint_entropy(cond));
        return s.value();
    }

    double mutual_information(int x, int y) const { return conditional_mi(x, y, VertexSet{}); }

private:
    struct Entry {
        double entropy = 0.0;
        std::shared_ptr<const std::vector<long>> cells;
    };

    void check_range(VertexSet s) const {
        if (!s.is_subset_of(table_->all())) throw ContractError("variable index outside the table");
    }

    const CategoricalTable* table_;
    int max_subset_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<VertexSet, Entry, VertexSetHash> cache_;
};

}  // namespace ancestral

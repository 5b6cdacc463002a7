#pragma once

#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "ancestral/errors.hpp"

namespace ancestral {

/// Default sample size above which the binary complexity switches to its
/// asymptotic expansion.
inline constexpr long default_exact_threshold = 1000;

/// log C^2_n by the binomial sum, evaluated in log space (0^0 = 1).
inline double exact_log_c2(long n) {
    if (n <= 0) return 0.0;
    const double nd = static_cast<double>(n);
    const double lgn1 = std::lgamma(nd + 1.0);
    std::vector<double> terms(static_cast<std::size_t>(n) + 1);
    double peak = -INFINITY;
    for (long h = 0; h <= n; ++h) {
        const double hd = static_cast<double>(h), rd = nd - hd;
        double t = lgn1 - std::lgamma(hd + 1.0) - std::lgamma(rd + 1.0);
        if (h > 0) t += hd * std::log(hd / nd);
        if (h < n) t += rd * std::log(rd / nd);
        terms[h] = t;
        peak = std::max(peak, t);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - peak);
    return peak + std::log(s);
}

/// Szpankowski expansion: C^2_n ~ sqrt(n pi / 2) exp(sqrt(8 / (9 n pi)) + (3 pi - 16) / (36 n pi)).
inline double szpankowski_log_c2(long n) {
    const double nd = static_cast<double>(n);
    const double pi = std::numbers::pi;
    return 0.5 * std::log(nd * pi / 2.0) + std::sqrt(8.0 / (9.0 * nd * pi)) + (3.0 * pi - 16.0) / (36.0 * nd * pi);
}

/// log C^r_n in nats: the multinomial NML normalizer for r levels and n samples.
/// r >= 3 goes through the ratio recursion D^r = 1 + n / ((r - 2) D^{r-1}).
inline double log_complexity(int r, long n, long exact_threshold = default_exact_threshold) {
    if (r < 1) throw ContractError("level count must be at least 1, got " + std::to_string(r));
    if (n < 0) throw ContractError("sample count must be non-negative");
    if (n == 0 || r == 1) return 0.0;
    const double log_c2 = n <= exact_threshold ? exact_log_c2(n) : szpankowski_log_c2(n);
    if (r == 2) return log_c2;
    const double nd = static_cast<double>(n);
    double d = std::exp(log_c2);
    double total = log_c2;
    for (int k = 3; k <= r; ++k) {
        d = 1.0 + nd / (static_cast<double>(k - 2) * d);
        total += std::log(d);
    }
    return total;
}

/// Memoized log C^r_n. Lookups take a lock; values are deterministic so a
/// racing recomputation stores the same number.
class ComplexityCache {
public:
    explicit ComplexityCache(long exact_threshold = default_exact_threshold) : threshold_(exact_threshold) {}

    long exact_threshold() const { return threshold_; }

    double operator()(int r, long n) const {
        if (r < 1) throw ContractError("level count must be at least 1, got " + std::to_string(r));
        if (n < 0) throw ContractError("sample count must be non-negative");
        if (n == 0 || r == 1) return 0.0;
        std::lock_guard lock(mutex_);
        if (table_.size() <= static_cast<std::size_t>(r)) table_.resize(r + 1);
        auto& row = table_[r];
        if (row.size() <= static_cast<std::size_t>(n)) row.resize(n + 1, NAN);
        double& v = row[n];
        if (std::isnan(v)) v = log_complexity(r, n, threshold_);
        return v;
    }

    /// Sum of log C^r_{n_j} over cell counts.
    template <typename Range>
    double sum(int r, const Range& cell_counts) const {
        double s = 0.0;
        for (auto nj : cell_counts) s += (*this)(r, static_cast<long>(nj));
        return s;
    }

private:
    long threshold_;
    mutable std::mutex mutex_;
    mutable std::vector<std::vector<double>> table_;
};

}  // namespace ancestral

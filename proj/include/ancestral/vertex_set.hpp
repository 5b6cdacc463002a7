#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ancestral/errors.hpp"

namespace ancestral {

/// Dense subset of {0, ..., 63}. Used for variable subsets, conditioning sets
/// and ancestor sets alike.
class VertexSet {
public:
    static constexpr int capacity = 64;

    constexpr VertexSet() = default;
    constexpr explicit VertexSet(std::uint64_t bits) : bits_(bits) {}
    VertexSet(std::initializer_list<int> members) {
        for (int v : members) insert(v);
    }

    static VertexSet from(const std::vector<int>& members) {
        VertexSet s;
        for (int v : members) s.insert(v);
        return s;
    }
    /// {0, ..., n-1}
    static VertexSet range(int n) {
        check(n == 0 ? 0 : n - 1);
        return VertexSet(n == capacity ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
    }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    int size() const { return std::popcount(bits_); }
    bool contains(int v) const { return v >= 0 && v < capacity && ((bits_ >> v) & 1u); }

    void insert(int v) {
        check(v);
        bits_ |= std::uint64_t{1} << v;
    }
    void erase(int v) {
        if (v >= 0 && v < capacity) bits_ &= ~(std::uint64_t{1} << v);
    }
    VertexSet with(int v) const {
        VertexSet s = *this;
        s.insert(v);
        return s;
    }
    VertexSet without(int v) const {
        VertexSet s = *this;
        s.erase(v);
        return s;
    }

    /// Smallest member; -1 when empty.
    int first() const { return bits_ ? std::countr_zero(bits_) : -1; }

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(size());
        for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
        return out;
    }

    bool is_subset_of(VertexSet other) const { return (bits_ & ~other.bits_) == 0; }
    bool intersects(VertexSet other) const { return (bits_ & other.bits_) != 0; }

    friend constexpr VertexSet operator|(VertexSet a, VertexSet b) { return VertexSet(a.bits_ | b.bits_); }
    friend constexpr VertexSet operator&(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & b.bits_); }
    friend constexpr VertexSet operator-(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & ~b.bits_); }
    VertexSet& operator|=(VertexSet o) { bits_ |= o.bits_; return *this; }
    VertexSet& operator&=(VertexSet o) { bits_ &= o.bits_; return *this; }
    friend constexpr bool operator==(VertexSet a, VertexSet b) = default;

    /// Size first, then lexicographic on the sorted member list.
    friend bool canonical_less(VertexSet a, VertexSet b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.members() < b.members();
    }

    /// Calls f(subset) for every subset of *this, including the empty set.
    template <typename F>
    void for_each_subset(F&& f) const {
        std::uint64_t sub = 0;
        while (true) {
            f(VertexSet(sub));
            if (sub == bits_) break;
            sub = (sub - bits_) & bits_;
        }
    }

private:
    static void check(int v) {
        if (v < 0 || v >= capacity)
            throw ContractError("vertex index " + std::to_string(v) + " outside [0, 64)");
    }

    std::uint64_t bits_ = 0;
};

struct VertexSetHash {
    std::size_t operator()(VertexSet s) const noexcept {
        std::uint64_t x = s.bits() + 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return static_cast<std::size_t>(x ^ (x >> 31));
    }
};

}  // namespace ancestral

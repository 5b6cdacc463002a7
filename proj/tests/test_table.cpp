#include <gtest/gtest.h>

#include <sstream>

#include "ancestral.hpp"
#include "generators.hpp"

using namespace ancestral;

namespace {

CategoricalTable parse(const std::string& text) {
    std::istringstream is(text);
    return load_table(is);
}

const char* kXor = "A,B,C\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n";

}  // namespace

TEST(Table, LoadsHeaderAndAssignsFirstAppearanceCodes) {
    auto t = parse("X,Y\nb,u\na,u\nb,v\n");
    ASSERT_EQ(t.n_vars(), 2);
    EXPECT_EQ(t.n_samples(), 3u);
    EXPECT_EQ(t.names()[1], "Y");
    EXPECT_EQ(t.levels(0), 2);
    EXPECT_EQ(t.code(0, 0), 0);
    EXPECT_EQ(t.code(1, 0), 1);
    EXPECT_EQ(t.labels(0)[0], "b");
}

TEST(Table, RejectsMalformedInput) {
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("A,B\n1\n"), ParseError);
    EXPECT_THROW(parse("A,B\n1,\n"), ParseError);
    EXPECT_THROW(parse("A,A\n1,2\n"), ParseError);
    EXPECT_THROW(parse("A,B\n"), ParseError);
}

TEST(Table, ParseErrorCarriesLineNumber) {
    try {
        parse("A,B\n1,2\n3\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Table, UniformGridCounts) {
    auto t = parse("A,B\n0,0\n0,1\n1,0\n1,1\n");
    auto c = counts(t, VertexSet{0, 1});
    EXPECT_EQ(c.cells.size(), 4u);
    for (const auto& [cfg, n] : c.cells) EXPECT_EQ(n, 1);
    auto a = counts(t, VertexSet{0});
    ASSERT_EQ(a.cells.size(), 2u);
    EXPECT_EQ(a.cells.at({0}), 2);
    EXPECT_EQ(a.cells.at({1}), 2);
}

TEST(Table, XorHasFourSingletonCells) {
    auto c = counts(parse(kXor), VertexSet{0, 1, 2});
    EXPECT_EQ(c.cells.size(), 4u);
    EXPECT_EQ(c.total(), 4);
}

TEST(Table, EmptySubsetIsContractError) { EXPECT_THROW(counts(parse(kXor), VertexSet{}), ContractError); }

TEST(Table, WriteThenLoadRoundTrips) {
    auto t = parse("X,Y\nb,u\na,u\nb,v\n");
    std::ostringstream os;
    write_table(os, t);
    auto back = parse(os.str());
    ASSERT_EQ(back.n_samples(), t.n_samples());
    for (std::size_t i = 0; i < t.n_samples(); ++i)
        for (int k = 0; k < 2; ++k) EXPECT_EQ(back.labels(k)[back.code(i, k)], t.labels(k)[t.code(i, k)]);
}

TEST(TableProperty, MarginalsAgreeWithDirectCounts) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = gen::random_table(6, 200, 4, rng);
        t.all().for_each_subset([&](VertexSet s) {
            if (s.empty() || s.size() > 5) return;
            auto full = counts(t, s);
            EXPECT_EQ(full.total(), static_cast<long>(t.n_samples()));
            for (int drop : s.members()) {
                VertexSet sub = s.without(drop);
                if (sub.empty()) continue;
                auto direct = counts(t, sub);
                std::map<std::vector<int>, long> summed;
                const auto keep = sub.members();
                for (const auto& [cfg, n] : full.cells) {
                    std::vector<int> key;
                    for (std::size_t j = 0; j < full.subset.size(); ++j)
                        if (sub.contains(full.subset[j])) key.push_back(cfg[j]);
                    summed[key] += n;
                }
                EXPECT_EQ(summed, direct.cells);
            }
        });
    }
}

TEST(TableProperty, CellCountsMatchCountVector) {
    Rng rng(5);
    auto t = gen::random_table(4, 300, 3, rng);
    auto c = counts(t, VertexSet{0, 2, 3});
    std::vector<long> v;
    for (const auto& [cfg, n] : c.cells) v.push_back(n);
    std::sort(v.begin(), v.end());
    EXPECT_EQ(cell_counts(t, VertexSet{0, 2, 3}), v);
}

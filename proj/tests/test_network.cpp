#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ancestral.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace ancestral;

namespace {

DiscreteNetwork parse(const std::string& text) {
    std::istringstream is(text);
    return parse_network(is);
}

DiscreteNetwork load(const std::string& file) {
    std::ifstream in(std::string(DATA_DIR) + "/" + file);
    return parse_network(in);
}

}  // namespace

TEST(Network, SingleVariable) {
    auto net = parse("var A: a,b\ncpt A: 0.5 0.5\n");
    EXPECT_EQ(net.size(), 1);
    EXPECT_EQ(net.levels[0].size(), 2u);
}

TEST(Network, ChainRecoversParents) {
    auto net = parse("# chain\nvar A: a0,a1\nvar B: b0,b1\ncpt A: 0.3 0.7\ncpt B | A: 0.9 0.1 ; 0.2 0.8\n");
    ASSERT_EQ(net.parents[1], (std::vector<int>{0}));
    EXPECT_TRUE(net.parents[0].empty());
    EXPECT_DOUBLE_EQ(net.cpt[1][1][1], 0.8);
    EXPECT_TRUE(net.dag().is_directed(0, 1));
}

TEST(Network, RowNotSummingToOneNamesTheRow) {
    try {
        parse("var A: a0,a1\nvar B: b0,b1\ncpt A: 0.5 0.5\ncpt B | A: 0.5 0.5 ; 0.6 0.3\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(Network, OtherParseErrors) {
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("var A: a\nvar A: b\n"), ParseError);
    EXPECT_THROW(parse("var A: a,b\n"), ParseError);
    EXPECT_THROW(parse("var A: a,b\ncpt A: 0.5 0.5 0.0\n"), ParseError);
    EXPECT_THROW(parse("var A: a,b\ncpt A: -0.5 1.5\n"), ParseError);
    EXPECT_THROW(parse("var A: a,b\ncpt A | Q: 0.5 0.5\n"), ParseError);
    EXPECT_THROW(parse("var A: a,b\ncpt A: 0.5 0.5\ncpt A: 0.5 0.5\n"), ParseError);
    EXPECT_THROW(parse("var A: a,b\nvar B: a,b\ncpt A | B: 1 0 ; 1 0\ncpt B | A: 1 0 ; 1 0\n"), ParseError);
    EXPECT_THROW(parse("var A: a,b\nbogus line\n"), ParseError);
    EXPECT_THROW(parse("var A: a,b\ncpt A: 0.5 x\n"), ParseError);
}

TEST(Network, WriteParseRoundTrip) {
    for (const char* f : {"model1.net", "model2.net", "model3.net", "net10.net", "chain.net", "vstructure.net"}) {
        auto net = load(f);
        std::ostringstream os;
        write_network(os, net);
        auto back = parse(os.str());
        EXPECT_EQ(back.names, net.names) << f;
        EXPECT_EQ(back.levels, net.levels) << f;
        EXPECT_EQ(back.parents, net.parents) << f;
        EXPECT_EQ(back.cpt, net.cpt) << f;
    }
}

TEST(Sample, DegenerateRootIsConstant) {
    auto net = parse("var A: a,b\ncpt A: 1.0 0.0\n");
    auto t = sample(net, 500, 3);
    EXPECT_EQ(t.levels(0), 1);
    EXPECT_EQ(t.labels(0)[0], "a");
}

TEST(Sample, FairRootFrequency) {
    auto net = parse("var A: a,b\ncpt A: 0.5 0.5\n");
    auto t = sample(net, 100000, 2024);
    auto c = counts(t, VertexSet{0});
    const double f = static_cast<double>(c.cells.begin()->second) / 100000.0;
    EXPECT_NEAR(f, 0.5, 0.01);
}

TEST(Sample, SameSeedSameTable) {
    auto net = load("net10.net");
    auto a = sample(net, 2000, 77);
    auto b = sample(net, 2000, 77);
    for (int k = 0; k < a.n_vars(); ++k) EXPECT_EQ(a.column(k), b.column(k));
    auto c = sample(net, 2000, 78);
    EXPECT_NE(a.column(0), c.column(0));
}

TEST(Sample, ColumnsFollowDeclarationOrderEvenWhenChildrenComeFirst) {
    auto net = parse("var B: b0,b1\nvar A: a0,a1\ncpt A: 0.5 0.5\ncpt B | A: 1 0 ; 0 1\n");
    auto t = sample(net, 1000, 5);
    EXPECT_EQ(t.names()[0], "B");
    InfoEstimator info(t);
    EXPECT_NEAR(info.mutual_information(0, 1), info.entropy(VertexSet{0}), 1e-12);
}

TEST(Hide, Examples) {
    auto net = load("vstructure.net");
    auto t = sample(net, 300, 1);
    auto same = hide(t, {});
    EXPECT_EQ(same.n_vars(), 3);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(same.column(k), t.column(k));
    auto two = hide(t, {"W"});
    EXPECT_EQ(two.n_vars(), 2);
    EXPECT_EQ(two.n_samples(), 300u);
    EXPECT_EQ(two.names(), (std::vector<std::string>{"X", "Z"}));
    EXPECT_THROW(hide(t, {"X", "W", "Z"}), ContractError);
    EXPECT_THROW(hide(t, {"Q"}), ContractError);
}

TEST(SampleProperty, ConditionalMiMatchesAnalyticValue) {
    Rng rng(303);
    for (int trial = 0; trial < 5; ++trial) {
        MixedGraph dag(3);
        dag.add_directed(0, 1);
        dag.add_directed(0, 2);
        if (trial % 2) dag.add_directed(1, 2);
        auto net = gen::random_network(dag, 2, 3, rng);
        const auto pj = oracle::joint(net);
        // I(X;Y|Z) with X = V1, Y = V2, Z = V0
        const double analytic = oracle::entropy(pj, {1, 0}) + oracle::entropy(pj, {2, 0}) -
                                oracle::entropy(pj, {0, 1, 2}) - oracle::entropy(pj, {0});
        auto t = sample(net, 200000, rng.next());
        EXPECT_NEAR(InfoEstimator(t).conditional_mi(1, 2, VertexSet{0}), analytic, 0.01);
    }
}

TEST(SampleProperty, HideMatchesMarginalOfFullSample) {
    auto net = load("model2.net");
    auto full = sample(net, 5000, 8);
    auto obs = hide(full, {"L"});
    const int l = full.index_of("L");
    std::vector<int> keep;
    for (int k = 0; k < full.n_vars(); ++k)
        if (k != l) keep.push_back(k);
    for (int i = 0; i < obs.n_vars(); ++i)
        for (int j = i + 1; j < obs.n_vars(); ++j)
            EXPECT_EQ(cell_counts(obs, VertexSet{i, j}), cell_counts(full, VertexSet{keep[i], keep[j]}));
}

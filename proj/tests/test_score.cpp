#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ancestral.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace ancestral;

namespace {

CategoricalTable parse(const std::string& text) {
    std::istringstream is(text);
    return load_table(is);
}

MixedGraph load_graph(const std::string& file) {
    std::ifstream in(std::string(DATA_DIR) + "/" + file);
    return read_graph(in);
}

DiscreteNetwork load_network(const std::string& file) {
    std::ifstream in(std::string(DATA_DIR) + "/" + file);
    return parse_network(in);
}

CategoricalTable independent_pair(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<int>> cols(2, std::vector<int>(n));
    for (auto& c : cols)
        for (auto& v : c) v = static_cast<int>(rng.below(2));
    return CategoricalTable::from_declared({"X", "Y"}, {{"0", "1"}, {"0", "1"}}, cols);
}

}  // namespace

TEST(NodeScore, EmptyParents) {
    auto t = independent_pair(500, 1);
    Scorer s(t);
    const double expected = s.info().entropy(VertexSet{0}) + log_complexity(2, 500) / 500.0;
    EXPECT_NEAR(s.node_score(0, {}), expected, 1e-14);
}

TEST(NodeScore, ConstantColumnScoresZero) {
    auto t = parse("A,B\nx,0\nx,1\nx,1\n");
    EXPECT_EQ(Scorer(t).node_score(0, {}), 0.0);
}

TEST(NodeScore, XorChildOfBothParents) {
    auto t = parse("A,B,C\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n");
    EXPECT_NEAR(Scorer(t).node_score(2, VertexSet{0, 1}), std::log(2.0), 1e-14);
    EXPECT_THROW(Scorer(t).node_score(2, VertexSet{2}), ContractError);
}

TEST(PairScore, RowsOfTheTable) {
    Rng rng(5);
    auto t = gen::random_table(4, 300, 3, rng);
    Scorer s(t);
    const VertexSet px{2}, py{3};
    EXPECT_EQ(s.pair_score(0, 1, {}, {}, PairKind::disconnected), s.node_score(0, {}) + s.node_score(1, {}));
    EXPECT_EQ(s.pair_score(0, 1, px, py, PairKind::x_to_y), s.node_score(0, px) + s.node_score(1, py.with(0)));
    EXPECT_EQ(s.pair_score(0, 1, px, py, PairKind::y_to_x), s.node_score(0, px.with(1)) + s.node_score(1, py));
    EXPECT_THROW(s.pair_score(0, 1, VertexSet{1}, {}, PairKind::x_to_y), ContractError);
}

TEST(PairScore, IndependentPairPrefersNoEdge) {
    auto t = independent_pair(1000, 42);
    Scorer s(t);
    EXPECT_LT(s.pair_score(0, 1, {}, {}, PairKind::disconnected), s.pair_score(0, 1, {}, {}, PairKind::x_to_y));
}

TEST(EdgeScore, EqualParentSetsGiveIdenticalScores) {
    Rng rng(6);
    auto t = gen::random_table(4, 400, 3, rng);
    Scorer s(t);
    const VertexSet p{2, 3};
    const double a = s.edge_orientation_score(0, 1, p, p, Orientation::x_to_y);
    EXPECT_EQ(a, s.edge_orientation_score(0, 1, p, p, Orientation::y_to_x));
    EXPECT_EQ(a, s.edge_orientation_score(0, 1, p, p, Orientation::bidirected));
}

TEST(EdgeScore, EmptyParentsAreMinusMiPlusSymmetricComplexity) {
    Rng rng(7);
    auto t = gen::random_table(2, 300, 4, rng);
    Scorer s(t);
    const double n = 300.0;
    const auto rx = t.levels(0), ry = t.levels(1);
    const double cx = ComplexityCache().sum(rx, cell_counts(t, VertexSet{1})) - log_complexity(rx, 300);
    const double cy = ComplexityCache().sum(ry, cell_counts(t, VertexSet{0})) - log_complexity(ry, 300);
    const double expected = -s.info().mutual_information(0, 1) + (cx + cy) / (2 * n);
    EXPECT_NEAR(s.edge_orientation_score(0, 1, {}, {}, Orientation::x_to_y), expected, 1e-14);
    EXPECT_EQ(s.edge_orientation_score(0, 1, {}, {}, Orientation::x_to_y),
              s.edge_orientation_score(0, 1, {}, {}, Orientation::y_to_x));
}

TEST(EdgeScore, UnsymmetrizedMatchesPairScoreDifference) {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = gen::random_table(5, 250, 3, rng);
        Scorer s(t);
        const VertexSet px{2}, py{3, 4};
        const double base = s.pair_score(0, 1, px, py, PairKind::disconnected);
        EXPECT_NEAR(s.edge_orientation_score(0, 1, px, py, Orientation::x_to_y, false),
                    s.pair_score(0, 1, px, py, PairKind::x_to_y) - base, 1e-12);
        EXPECT_NEAR(s.edge_orientation_score(0, 1, px, py, Orientation::y_to_x, false),
                    s.pair_score(0, 1, px, py, PairKind::y_to_x) - base, 1e-12);
    }
}

TEST(EdgeScore, Model1PrefersBidirectedAtLargeN) {
    auto net = load_network("model1.net");
    auto data = hide(sample(net, 20000, 99), {"L"});
    Scorer s(data);
    const int x1 = data.index_of("X1"), x2 = data.index_of("X2"), x3 = data.index_of("X3"),
              x4 = data.index_of("X4");
    const VertexSet pa_x2{x1}, pa_x4{x3};
    const double xy = s.edge_orientation_score(x2, x4, pa_x2, pa_x4, Orientation::x_to_y);
    const double yx = s.edge_orientation_score(x2, x4, pa_x2, pa_x4, Orientation::y_to_x);
    const double bi = s.edge_orientation_score(x2, x4, pa_x2, pa_x4, Orientation::bidirected);
    EXPECT_LT(bi, xy);
    EXPECT_LT(bi, yx);
}

TEST(EdgeScoreProperty, SharedParentsAlwaysTie) {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = gen::random_table(5, 50 + rng.below(400), 4, rng);
        Scorer s(t, {rng.uniform() < 0.5 ? Penalty::fnml : Penalty::bic});
        VertexSet p;
        for (int k = 2; k < 5; ++k)
            if (rng.uniform() < 0.5) p.insert(k);
        const double a = s.edge_orientation_score(0, 1, p, p, Orientation::x_to_y);
        EXPECT_NEAR(a, s.edge_orientation_score(0, 1, p, p, Orientation::y_to_x), 1e-12);
        EXPECT_NEAR(a, s.edge_orientation_score(0, 1, p, p, Orientation::bidirected), 1e-12);
    }
}

TEST(GlobalScore, EmptyGraphIsSumOfEntropies) {
    Rng rng(10);
    auto t = gen::random_table(5, 300, 3, rng);
    Scorer s(t);
    double h = 0.0;
    for (int k = 0; k < 5; ++k) h += s.info().entropy(VertexSet{k});
    auto g = s.global_score(MixedGraph(t.names()));
    EXPECT_NEAR(g.value, h, 1e-12);
    EXPECT_EQ(g.subset_count, 5u);
}

TEST(GlobalScore, RejectsUndirectedAndNonAncestral) {
    Rng rng(11);
    auto t = gen::random_table(3, 50, 2, rng);
    Scorer s(t);
    MixedGraph u(t.names());
    u.add_undirected(0, 1);
    EXPECT_THROW(s.global_score(u), ContractError);
    MixedGraph c(t.names());
    c.add_directed(0, 1);
    c.add_directed(1, 2);
    c.add_bidirected(0, 2);
    EXPECT_THROW(s.global_score(c), ContractError);
}

TEST(GlobalScore, BicCorrectionPerTerm) {
    Rng rng(12);
    auto t = gen::random_table(3, 400, 3, rng);
    Scorer s(t);
    MixedGraph g(t.names());
    g.add_directed(0, 1);
    GlobalScoreOptions opt;
    opt.regularizer = Regularizer::bic;
    opt.keep_ledger = true;
    auto bic = s.global_score(g, opt);
    auto plain = s.global_score(g);
    double correction = 0.0;
    for (const auto& e : bic.ledger) {
        double prod = 1.0;
        for (int k : e.subset.members()) prod *= 1.0 - t.levels(k);
        correction += e.sign * (-0.5 * prod * std::log(400.0) / 400.0);
    }
    EXPECT_NEAR(bic.value, plain.value + correction, 1e-12);
}

TEST(GlobalScoreProperty, DagScoreIsConditionalEntropySum) {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        auto dag = gen::random_dag(6, 0.4, rng);
        auto net = gen::random_network(dag, 2, 3, rng);
        auto t = sample(net, 400, rng.next());
        if (t.n_vars() != 6) continue;
        Scorer s(t);
        double direct = 0.0;
        for (int v = 0; v < 6; ++v) {
            const VertexSet pa = dag.parents(v);
            direct += s.info().entropy(pa.with(v)) - (pa.empty() ? 0.0 : s.info().entropy(pa));
        }
        const double g = s.global_score(dag).value;
        EXPECT_NEAR(g, direct, 1e-8 * std::max(1.0, std::abs(direct)));
        EXPECT_NEAR(s.dag_conditional_entropy_sum(dag), direct, 1e-10);
    }
}

TEST(GlobalScore, Fig1FMinusGIsTheTwoDifferingTerms) {
    // Any four-variable sample will do; the identity is exact on the plug-in estimates.
    Rng rng(14);
    auto t = gen::random_table(4, 2000, 3, rng);
    std::vector<std::vector<int>> cols;
    std::vector<std::vector<std::string>> labels;
    for (int k = 0; k < 4; ++k) {
        cols.push_back(t.column(k));
        labels.push_back(t.labels(k));
    }
    auto data = CategoricalTable::from_declared({"X", "Y", "Z", "T"}, labels, cols);
    Scorer s(data);
    auto f = load_graph("fig1_f.graph");
    auto g = load_graph("fig1_g.graph");
    const double diff = s.global_score(f).value - s.global_score(g).value;
    const double xyt = s.info().multi_information(VertexSet{0, 1, 3});
    const double xyzt = s.info().multi_information(VertexSet{0, 1, 2, 3});
    // G gains {X,Y,T} (odd, +I) and {X,Y,Z,T} (even, -I).
    EXPECT_NEAR(diff, -(xyt - xyzt), 1e-9);
}

TEST(GlobalScore, TwoColliderRestrictionNeverAddsSubsets) {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = gen::random_ancestral(7, 0.35, 0.4, rng);
        EnumerationLimits all, two;
        two.max_colliders = 2;
        auto a = enumerate_ac_connected(g, all);
        auto b = enumerate_ac_connected(g, two);
        EXPECT_LE(b.size(), a.size());
        EXPECT_TRUE(std::includes(a.begin(), a.end(), b.begin(), b.end(),
                                  [](VertexSet x, VertexSet y) { return canonical_less(x, y); }));
    }
}

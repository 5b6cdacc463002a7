#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <thread>

#include "ancestral.hpp"
#include "generators.hpp"

using namespace ancestral;

namespace {

CategoricalTable parse(const std::string& text) {
    std::istringstream is(text);
    return load_table(is);
}

CategoricalTable xor_table() { return parse("A,B,C\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n"); }

}  // namespace

TEST(Entropy, ConstantColumnIsZero) {
    auto t = parse("A\nx\nx\nx\n");
    EXPECT_EQ(InfoEstimator(t).entropy(VertexSet{0}), 0.0);
}

TEST(Entropy, UniformBinaryIsLn2) {
    auto t = parse("A\n0\n1\n0\n1\n");
    EXPECT_NEAR(InfoEstimator(t).entropy(VertexSet{0}), std::log(2.0), 1e-15);
}

TEST(Entropy, XorJointIsLn4) {
    auto t = xor_table();
    EXPECT_NEAR(InfoEstimator(t).entropy(VertexSet{0, 1, 2}), std::log(4.0), 1e-15);
}

TEST(Entropy, EmptySubsetIsContractError) {
    auto t = xor_table();
    EXPECT_THROW(InfoEstimator(t).entropy(VertexSet{}), ContractError);
}

TEST(MultiInformation, SingletonIsEntropy) {
    auto t = xor_table();
    InfoEstimator info(t);
    EXPECT_DOUBLE_EQ(info.multi_information(VertexSet{1}), info.entropy(VertexSet{1}));
}

TEST(MultiInformation, IndependentPairIsZero) {
    auto t = parse("A,B\n0,0\n0,1\n1,0\n1,1\n");
    EXPECT_NEAR(InfoEstimator(t).multi_information(VertexSet{0, 1}), 0.0, 1e-12);
}

TEST(MultiInformation, XorTripleIsMinusLn2) {
    auto t = xor_table();
    EXPECT_NEAR(InfoEstimator(t).multi_information(VertexSet{0, 1, 2}), -std::log(2.0), 1e-12);
}

TEST(MultiInformation, CapExceededIsResourceError) {
    Rng rng(1);
    auto t = gen::random_table(5, 20, 2, rng);
    InfoEstimator info(t, 3);
    EXPECT_THROW(info.multi_information(VertexSet{0, 1, 2, 3}), ResourceError);
}

TEST(ConditionalMi, XorValues) {
    auto t = xor_table();
    InfoEstimator info(t);
    EXPECT_NEAR(info.conditional_mi(0, 1, VertexSet{2}), std::log(2.0), 1e-12);
    EXPECT_NEAR(info.conditional_mi(0, 1, VertexSet{}), 0.0, 1e-12);
}

TEST(ConditionalMi, OverlapIsContractError) {
    auto t = xor_table();
    InfoEstimator info(t);
    EXPECT_THROW(info.conditional_mi(0, 1, VertexSet{1}), ContractError);
    EXPECT_THROW(info.conditional_mi(0, 0, VertexSet{}), ContractError);
    EXPECT_THROW(info.conditional_multi_information(VertexSet{0, 1}, VertexSet{1}), ContractError);
}

TEST(ConditionalMultiInformation, EmptyConditioningMatchesUnconditional) {
    Rng rng(3);
    auto t = gen::random_table(4, 150, 3, rng);
    InfoEstimator info(t);
    EXPECT_DOUBLE_EQ(info.conditional_multi_information(VertexSet{0, 1, 3}, VertexSet{}),
                     info.multi_information(VertexSet{0, 1, 3}));
    auto x = xor_table();
    EXPECT_NEAR(InfoEstimator(x).conditional_multi_information(VertexSet{0, 1, 2}, VertexSet{}), -std::log(2.0),
                1e-12);
}

TEST(InfoProperty, ChainRuleOnThreeVariables) {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = gen::random_table(3, 100, 4, rng);
        InfoEstimator info(t);
        const double lhs = info.mutual_information(0, 1) - info.multi_information(VertexSet{0, 1, 2});
        EXPECT_NEAR(lhs, info.conditional_mi(0, 1, VertexSet{2}), 1e-12);
    }
}

TEST(InfoProperty, InclusionExclusionRecoversEntropy) {
    // H(V) = sum_{S subset of V, S nonempty} (-1)^(|S|+1) I(S)
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = gen::random_table(5, 120, 3, rng);
        InfoEstimator info(t);
        t.all().for_each_subset([&](VertexSet v) {
            if (v.empty()) return;
            double h = 0.0;
            v.for_each_subset([&](VertexSet s) {
                if (s.empty()) return;
                h += ((s.size() % 2 == 1) ? 1.0 : -1.0) * info.multi_information(s);
            });
            EXPECT_NEAR(h, info.entropy(v), 1e-10);
        });
    }
}

TEST(InfoProperty, DecompositionRelativeToAVariable) {
    // I(V) = I(V | Z) + I(V; Z)
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = gen::random_table(5, 150, 3, rng);
        InfoEstimator info(t);
        const int z = static_cast<int>(rng.below(5));
        t.all().without(z).for_each_subset([&](VertexSet v) {
            if (v.empty() || v.size() > 3) return;
            const double lhs = info.multi_information(v);
            const double rhs = info.conditional_multi_information(v, VertexSet{z}) + info.multi_information(v.with(z));
            EXPECT_NEAR(lhs, rhs, 1e-10);
        });
    }
}

TEST(InfoProperty, ConditionalMiIsSignedSumOfCrossInformation) {
    // I(X;Y|A) = sum over S' subset of S = {X,Y} u A containing X and Y of (-1)^|S'| I(S')
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        auto t = gen::random_table(5, 200, 3, rng);
        InfoEstimator info(t);
        const int a_size = static_cast<int>(rng.below(4));
        VertexSet a;
        for (int k = 2; k < 2 + a_size; ++k) a.insert(k);
        double sum = 0.0;
        a.for_each_subset([&](VertexSet extra) {
            VertexSet s = extra.with(0).with(1);
            sum += ((s.size() % 2 == 0) ? 1.0 : -1.0) * info.multi_information(s);
        });
        EXPECT_NEAR(sum, info.conditional_mi(0, 1, a), 1e-9);
    }
}

TEST(InfoProperty, NonNegativity) {
    Rng rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        auto t = gen::random_table(4, 60, 4, rng);
        InfoEstimator info(t);
        t.all().for_each_subset([&](VertexSet s) {
            if (!s.empty()) { EXPECT_GE(info.entropy(s), -1e-12); }
        });
        for (int x = 0; x < 4; ++x)
            for (int y = x + 1; y < 4; ++y)
                t.all().without(x).without(y).for_each_subset(
                    [&](VertexSet c) { EXPECT_GE(info.conditional_mi(x, y, c), -1e-12); });
    }
}

TEST(InfoProperty, ConcurrentReadersMatchSequential) {
    Rng rng(41);
    auto t = gen::random_table(8, 500, 3, rng);
    InfoEstimator seq(t);
    InfoEstimator shared(t);
    std::vector<double> expected;
    std::vector<VertexSet> subsets;
    t.all().for_each_subset([&](VertexSet s) {
        if (s.size() >= 1 && s.size() <= 4) {
            subsets.push_back(s);
            expected.push_back(seq.multi_information(s));
        }
    });
    std::vector<double> got(subsets.size());
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < subsets.size(); i += 4) got[i] = shared.multi_information(subsets[i]);
        });
    for (auto& th : pool) th.join();
    EXPECT_EQ(got, expected);
}

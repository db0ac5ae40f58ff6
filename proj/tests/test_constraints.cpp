#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "conivat/constraints.hpp"
#include "oracles.hpp"

using namespace conivat;

namespace {

FeatureMatrix labeled(const Labels& labels) {
    Matrix m(labels.size(), 1);
    for (std::size_t i = 0; i < labels.size(); ++i) m(i, 0) = static_cast<double>(i);
    return FeatureMatrix(m, labels);
}

ConstraintSet make(std::size_t n, std::vector<std::pair<int, int>> s, std::vector<std::pair<int, int>> d) {
    ConstraintSet cs(n);
    for (auto [a, b] : s) cs.add_similar(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    for (auto [a, b] : d) cs.add_dissimilar(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    return cs;
}

bool subset(const PairSet& a, const PairSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

ConstraintSet random_constraints(std::size_t n, std::size_t ns, std::size_t nd, std::mt19937_64& gen) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    ConstraintSet cs(n);
    while (cs.similar().size() < ns) {
        auto a = pick(gen), b = pick(gen);
        if (a != b) cs.add_similar(a, b);
    }
    while (cs.dissimilar().size() < nd) {
        auto a = pick(gen), b = pick(gen);
        if (a != b) cs.add_dissimilar(a, b);
    }
    return cs;
}

} // namespace

TEST(ConstraintSet, RejectsBadPairs) {
    ConstraintSet cs(3);
    EXPECT_THROW(cs.add_similar(1, 1), InputError);
    EXPECT_THROW(cs.add_dissimilar(0, 3), InputError);
    cs.add_similar(2, 0);
    EXPECT_EQ(cs.similar().begin()->first, 0u);
}

TEST(Generate, CountMatchesRequest) {
    const auto iris = load_csv(std::string(CONIVAT_DATA_DIR) + "/iris.csv", "species").data;
    const auto cs = generate_from_labels(iris, 30, 1);
    EXPECT_EQ(cs.size(), 30u);
    for (const auto& p : cs.similar()) EXPECT_EQ(iris.labels()[p.first], iris.labels()[p.second]);
    for (const auto& p : cs.dissimilar()) EXPECT_NE(iris.labels()[p.first], iris.labels()[p.second]);
}

TEST(Generate, ZeroCount) { EXPECT_TRUE(generate_from_labels(labeled({0, 1, 0}), 0, 1).empty()); }

TEST(Generate, AllPairsMatchLabelComparison) {
    const Labels labels{0, 1, 1, 0, 0, 1, 0};
    const auto d = labeled(labels);
    const std::size_t n = labels.size();
    const auto cs = generate_from_labels(d, n * (n - 1) / 2, 5);
    PairSet same, diff;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) (labels[i] == labels[j] ? same : diff).insert({i, j});
    EXPECT_EQ(cs.similar(), same);
    EXPECT_EQ(cs.dissimilar(), diff);
}

TEST(Generate, PoolRestrictsIndices) {
    const auto d = labeled({0, 1, 0, 1, 0, 1, 0, 1});
    const std::vector<std::size_t> pool{1, 4, 6};
    const auto cs = generate_from_labels(d, 3, 2, pool);
    EXPECT_EQ(cs.size(), 3u);
    auto in_pool = [&](std::size_t i) { return std::find(pool.begin(), pool.end(), i) != pool.end(); };
    for (const auto& p : cs.similar()) EXPECT_TRUE(in_pool(p.first) && in_pool(p.second));
    for (const auto& p : cs.dissimilar()) EXPECT_TRUE(in_pool(p.first) && in_pool(p.second));
}

TEST(Generate, DeterministicPerSeed) {
    const auto d = gen_synth1(1);
    EXPECT_EQ(generate_from_labels(d, 30, 7), generate_from_labels(d, 30, 7));
    EXPECT_NE(generate_from_labels(d, 30, 7), generate_from_labels(d, 30, 8));
}

TEST(Generate, Errors) {
    const auto d = labeled({0, 1, 0});
    EXPECT_THROW(generate_from_labels(d, 4, 1), InputError);
    EXPECT_THROW(generate_from_labels(FeatureMatrix(Matrix(3, 1)), 1, 1), InputError);
    EXPECT_THROW(generate_from_labels(d, 1, 1, std::vector<std::size_t>{0, 7}), InputError);
}

TEST(Closure, SimilarChain) {
    const auto out = transitive_closure(make(4, {{1, 2}, {2, 3}}, {}));
    EXPECT_TRUE(out.similar().count({1, 3}));
    EXPECT_EQ(out.similar().size(), 3u);
}

TEST(Closure, DissimilarPropagatesThroughSimilar) {
    const auto out = transitive_closure(make(6, {{1, 4}}, {{4, 5}}));
    EXPECT_TRUE(out.dissimilar().count({1, 5}));
}

TEST(Closure, Empty) { EXPECT_TRUE(transitive_closure(ConstraintSet(5)).empty()); }

TEST(Closure, IdempotentMonotoneProperty) {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto cs = random_constraints(15, 6, 5, gen);
        const auto once = transitive_closure(cs);
        EXPECT_EQ(transitive_closure(once), once);
        EXPECT_TRUE(subset(cs.similar(), once.similar()));
        EXPECT_TRUE(subset(cs.dissimilar(), once.dissimilar()));
    }
}

TEST(Closure, MatchesWarshallReachabilityOracle) {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 19;  // N ≤ 20
        const auto cs = random_constraints(n, std::min<std::size_t>(n - 1, 1 + trial % 7), std::min<std::size_t>(n * (n - 1) / 2, 1 + trial % 4), gen);
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& p : cs.similar()) edges.emplace_back(p.first, p.second);
        const auto reach = oracle::reachability(n, edges);
        PairSet similar, dissimilar;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (reach[i][j]) similar.insert({i, j});
        for (const auto& p : cs.dissimilar())
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j && reach[i][p.first] && reach[j][p.second]) dissimilar.insert({i, j});
        const auto out = transitive_closure(cs);
        EXPECT_EQ(out.similar(), similar);
        EXPECT_EQ(out.dissimilar(), dissimilar);
    }
}

TEST(RemoveInconsistent, ExplicitConflict) {
    const auto r = remove_inconsistent(make(7, {{1, 2}, {2, 6}}, {{1, 6}}));
    EXPECT_TRUE(r.constraints.dissimilar().empty());
    ASSERT_EQ(r.removed.size(), 1u);
    EXPECT_EQ(r.removed.front(), IndexPair(1, 6));
    EXPECT_EQ(r.constraints.similar().size(), 2u);
}

TEST(RemoveInconsistent, DisjointUnchanged) {
    const auto cs = make(6, {{0, 1}}, {{2, 3}, {1, 4}});
    const auto r = remove_inconsistent(cs);
    EXPECT_EQ(r.constraints, cs);
    EXPECT_TRUE(r.removed.empty());
}

TEST(RemoveInconsistent, ChainRemovesExactlyTheInnerEdge) {
    const auto cs = make(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}, {{1, 4}, {0, 7}, {8, 9}});
    const auto r = remove_inconsistent(cs);
    ASSERT_EQ(r.removed.size(), 1u);
    EXPECT_EQ(r.removed.front(), IndexPair(1, 4));
    // Oracle: component labels by reachability; no intra-component edge left.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& p : cs.similar()) edges.emplace_back(p.first, p.second);
    const auto reach = oracle::reachability(10, edges);
    for (const auto& p : r.constraints.dissimilar()) EXPECT_FALSE(reach[p.first][p.second]);
}

TEST(Sanitize, NoDissimilarInsideSimilarComponent) {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto cs = random_constraints(20, 8, 8, gen);
        const auto clean = sanitize(cs);
        const auto comp = clean.similar_components();
        for (const auto& p : clean.dissimilar()) EXPECT_NE(comp[p.first], comp[p.second]);
        EXPECT_EQ(sanitize(clean), clean);
    }
}

TEST(ConstraintFile, RoundTrip) {
    const auto cs = make(8, {{0, 3}, {5, 1}}, {{2, 7}});
    std::ostringstream out;
    write_constraints(cs, out);
    EXPECT_EQ(out.str(), "S 0 3\nS 1 5\nD 2 7\n");
    std::istringstream in("# comment\nS 0 3\n\nS 5 1\nD 2 7\n");
    EXPECT_EQ(read_constraints(in, 8), cs);
}

TEST(ConstraintFile, Malformed) {
    std::istringstream bad1("X 0 1\n");
    EXPECT_THROW(read_constraints(bad1, 4), InputError);
    std::istringstream bad2("S 0\n");
    EXPECT_THROW(read_constraints(bad2, 4), InputError);
    std::istringstream bad3("D 0 9\n");
    EXPECT_THROW(read_constraints(bad3, 4), InputError);
}

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "conivat/vat.hpp"
#include "oracles.hpp"

using namespace conivat;

namespace {

DissimilarityMatrix from_rows(std::vector<std::vector<double>> rows) {
    Matrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    return DissimilarityMatrix(std::move(m));
}

DissimilarityMatrix line(std::vector<double> xs) {
    Matrix m(xs.size(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) m(i, j) = std::abs(xs[i] - xs[j]);
    return DissimilarityMatrix(std::move(m));
}

bool is_permutation_of_iota(std::vector<std::size_t> order) {
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i] != i) return false;
    return true;
}

FeatureMatrix bridged_pair() {
    // Two tight groups joined by an evenly spaced chain; the chain makes
    // plain single linkage see one long cluster.
    Matrix m(14, 1);
    for (std::size_t i = 0; i < 14; ++i) m(i, 0) = static_cast<double>(i) / 13.0;
    Labels labels(14);
    for (std::size_t i = 0; i < 14; ++i) labels[i] = i < 7 ? 0 : 1;
    return FeatureMatrix(m, labels);
}

} // namespace

TEST(VatReorder, SingleObject) {
    const auto r = vat_reorder(DissimilarityMatrix(Matrix(1, 1)));
    EXPECT_EQ(r.order, std::vector<std::size_t>{0});
    EXPECT_TRUE(r.cut_magnitudes.empty());
    EXPECT_EQ(r.reordered.size(), 1u);
}

TEST(VatReorder, ThreePointLine) {
    const auto r = vat_reorder(line({0, 1, 10}));
    EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(r.cut_magnitudes, (std::vector<double>{1, 9}));
    EXPECT_EQ(r.mst_parent, (std::vector<std::size_t>{0, 0, 1}));
}

TEST(VatReorder, SeedIsFirstRowMajorMaximum) {
    const auto d = from_rows({{0, 5, 5}, {5, 0, 1}, {5, 1, 0}});
    EXPECT_EQ(vat_reorder(d).order.front(), 0u);
}

TEST(VatReorder, TiesPickLowestIndex) {
    const auto d = from_rows({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}});
    EXPECT_EQ(vat_reorder(d).order, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(VatReorder, ReorderedMatchesPermutedInput) {
    std::mt19937_64 gen(4);
    const auto d = oracle::random_dissimilarity(25, gen);
    const auto r = vat_reorder(d);
    ASSERT_TRUE(is_permutation_of_iota(r.order));
    for (std::size_t s = 0; s < 25; ++s)
        for (std::size_t t = 0; t < 25; ++t) EXPECT_EQ(r.reordered(s, t), d(r.order[s], r.order[t]));
    for (std::size_t t = 1; t < 25; ++t) {
        EXPECT_LT(r.mst_parent[t], t);
        EXPECT_EQ(r.cut_magnitudes[t - 1], r.reordered(t, r.mst_parent[t]));
    }
}

TEST(VatReorder, MstWeightMatchesKruskal) {
    std::mt19937_64 gen(40);
    for (std::size_t n : {2u, 7u, 40u}) {
        const auto d = oracle::random_dissimilarity(n, gen);
        auto prim = vat_reorder(d).cut_magnitudes;
        auto kruskal = oracle::kruskal_mst_weights(d);
        std::sort(prim.begin(), prim.end());
        std::sort(kruskal.begin(), kruskal.end());
        EXPECT_EQ(prim, kruskal);
    }
}

TEST(Minimax, ChainThroughSmallerEdge) {
    const auto d = from_rows({{0, 2, 5}, {2, 0, 1}, {5, 1, 0}});
    const auto m = minimax_transform(d);
    EXPECT_EQ(m(0, 2), 2.0);
    EXPECT_EQ(m(0, 1), 2.0);
    EXPECT_EQ(m(1, 2), 1.0);
}

TEST(Minimax, UltrametricIsFixedPoint) {
    const auto d = from_rows({{0, 1, 3, 3}, {1, 0, 3, 3}, {3, 3, 0, 2}, {3, 3, 2, 0}});
    EXPECT_EQ(minimax_transform(d), d);
}

TEST(Minimax, EqualsFloydWarshallExactly) {
    std::mt19937_64 gen(50);
    for (std::size_t n : {1u, 2u, 3u, 10u, 50u}) {
        const auto d = oracle::random_dissimilarity(n, gen);
        EXPECT_EQ(minimax_transform(d).matrix(), oracle::floyd_warshall_minimax(d)) << "n=" << n;
    }
}

TEST(Minimax, Properties) {
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(trial) * 3;
        const auto d = oracle::random_dissimilarity(n, gen);
        const auto m = minimax_transform(d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_LE(m(i, j), d(i, j));
                for (std::size_t k = 0; k < n; ++k) EXPECT_LE(m(i, j), std::max(m(i, k), m(k, j)));
            }
        EXPECT_EQ(minimax_transform(m), m);

        // Off-diagonal entries of the minimax matrix come from MST edges.
        const auto mst = vat_reorder(d).cut_magnitudes;
        std::set<double> edges(mst.begin(), mst.end());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) { EXPECT_TRUE(edges.count(m(i, j))); }
    }
}

TEST(Minimax, ReorderingPreservesEntryMultiset) {
    std::mt19937_64 gen(12);
    const auto d = minimax_transform(oracle::random_dissimilarity(20, gen));
    const auto r = vat_reorder(d);
    std::vector<double> a(d.matrix().values().begin(), d.matrix().values().end());
    std::vector<double> b(r.reordered.matrix().values().begin(), r.reordered.matrix().values().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
}

TEST(ImposeSimilar, ZeroesPairsSymmetrically) {
    ConstraintSet cs(3);
    cs.add_similar(0, 2);
    const auto out = impose_similar(line({0, 1, 10}), cs);
    EXPECT_EQ(out(0, 2), 0.0);
    EXPECT_EQ(out(2, 0), 0.0);
    EXPECT_EQ(out(0, 1), 1.0);
}

TEST(ImposeSimilar, EmptyIsIdentity) {
    const auto d = line({0, 1, 10});
    EXPECT_EQ(impose_similar(d, ConstraintSet(3)), d);
}

TEST(ImposeSimilar, OutOfRange) {
    ConstraintSet cs(10);
    cs.add_similar(1, 7);
    EXPECT_THROW(impose_similar(line({0, 1, 10}), cs), InputError);
}

TEST(Variant, NamesRoundTrip) {
    for (Variant v : all_variants) EXPECT_EQ(parse_variant(variant_name(v)), v);
    EXPECT_THROW(parse_variant("vat"), InputError);
}

TEST(Pipeline, IvatEqualsPlainMinimax) {
    std::mt19937_64 gen(3);
    Matrix m(15, 2);
    std::uniform_real_distribution<double> u(0, 1);
    for (double& v : m.values()) v = u(gen);
    const FeatureMatrix data(m);
    ConstraintSet cs(15);
    cs.add_similar(0, 1);
    cs.add_dissimilar(2, 3);
    const auto r = conivat_pipeline(data, cs, {}, Variant::ivat);
    const auto expected = minimax_transform(euclidean_dissimilarity(data));
    EXPECT_EQ(r.transformed, expected);
    EXPECT_EQ(r.vat.reordered, vat_reorder(expected).reordered);
    EXPECT_FALSE(r.learning.has_value());
}

TEST(Pipeline, MtdVatZeroesSimilarClique) {
    Matrix m(6, 1);
    for (std::size_t i = 0; i < 6; ++i) m(i, 0) = static_cast<double>(i * i);
    const FeatureMatrix data(m);
    ConstraintSet cs(6);
    cs.add_similar(0, 5);
    cs.add_similar(5, 2);
    const auto r = conivat_pipeline(data, cs, {}, Variant::mtd_vat);
    EXPECT_EQ(r.constraints.similar().size(), 3u);
    EXPECT_EQ(r.transformed(0, 2), 0.0);
    EXPECT_EQ(r.transformed(0, 5), 0.0);
    EXPECT_EQ(r.transformed(2, 5), 0.0);
    EXPECT_GT(r.transformed(0, 1), 0.0);
}

TEST(Pipeline, ConivatSeparatesBridgedGroups) {
    const auto data = bridged_pair();
    ConstraintSet cs(14);
    for (std::size_t i = 0; i + 1 < 7; ++i) {
        cs.add_similar(i, i + 1);
        cs.add_similar(i + 7, i + 8);
    }
    cs.add_dissimilar(0, 13);
    const auto plain = conivat_pipeline(data, cs, {}, Variant::ivat);
    const auto r = conivat_pipeline(data, cs, {}, Variant::conivat);
    ASSERT_TRUE(r.learning.has_value());
    // Plain iVAT has no dominant cut on an evenly spaced chain.
    const auto& pc = plain.vat.cut_magnitudes;
    EXPECT_NEAR(*std::max_element(pc.begin(), pc.end()), *std::min_element(pc.begin(), pc.end()), 1e-12);
    // With the groups collapsed, the largest cut splits 0..6 from 7..13.
    const auto& c = r.vat.cut_magnitudes;
    const auto big = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin()) + 1;
    std::set<std::size_t> head(r.vat.order.begin(), r.vat.order.begin() + static_cast<std::ptrdiff_t>(big));
    const bool first_group = head.count(0) > 0;
    EXPECT_EQ(head.size(), 7u);
    for (std::size_t i = 0; i < 14; ++i) EXPECT_EQ(head.count(i) > 0, (i < 7) == first_group) << i;
}

TEST(Pipeline, SizeMismatch) {
    Matrix m(4, 1);
    EXPECT_THROW(conivat_pipeline(FeatureMatrix(m), ConstraintSet(5), {}, Variant::conivat), InputError);
}

#include "shapebench/core.hpp"
#include "shapebench/rng.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace shapebench;
using namespace shapebench::testing;

TEST(BinaryShape, RejectsBadDimensionsAndNormalizesValues) {
    EXPECT_THROW(BinaryShape(0, 3), ShapeError);
    EXPECT_THROW(BinaryShape(3, -1), ShapeError);
    const BinaryShape n(2, 2, std::vector<std::uint8_t>{0, 1, 255, 0});
    EXPECT_EQ(n.at(0, 1), 1);
    EXPECT_THROW(BinaryShape(2, 2, std::vector<std::uint8_t>{0, 1, 0}), ShapeError);
    BinaryShape s(3, 2, 1);
    EXPECT_EQ(s.foreground_count(), 6u);
}

TEST(Iou, IdenticalShapesGiveOne) {
    const auto a = filled_rect(8, 8, 1, 1, 4, 3);
    EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
}

TEST(Iou, DisjointShapesGiveZero) {
    const auto a = filled_rect(8, 8, 0, 0, 2, 2);
    const auto b = filled_rect(8, 8, 5, 5, 2, 2);
    EXPECT_DOUBLE_EQ(iou(a, b), 0.0);
}

TEST(Iou, ShiftedBlockGivesHalf) {
    const auto a = filled_rect(6, 3, 0, 0, 3, 3);
    const auto b = filled_rect(6, 3, 1, 0, 3, 3);
    EXPECT_DOUBLE_EQ(brute_iou(a, b), 0.5);
    EXPECT_DOUBLE_EQ(iou(a, b), 0.5);
}

TEST(Iou, EmptyConventions) {
    const BinaryShape e(4, 4);
    const auto f = filled_rect(4, 4, 1, 1, 1, 1);
    EXPECT_DOUBLE_EQ(iou(e, e), 1.0);
    EXPECT_DOUBLE_EQ(iou(e, f), 0.0);
    EXPECT_DOUBLE_EQ(iou(f, e), 0.0);
}

TEST(Iou, DimensionMismatchThrows) {
    EXPECT_THROW(iou(BinaryShape(4, 4), BinaryShape(4, 5)), ShapeError);
}

TEST(Iou, MatchesBruteForceAndIsSymmetric) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dens(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const auto a = random_shape(16, 16, dens(gen), gen);
        const auto b = random_shape(16, 16, dens(gen), gen);
        EXPECT_EQ(iou(a, b), brute_iou(a, b));
        EXPECT_EQ(iou(a, b), iou(b, a));
        if (a.foreground_count() > 0) {
            EXPECT_EQ(iou(a, a), 1.0);
        }
        const double v = iou(a, b);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
}

TEST(CenterOfMass, SinglePixel) {
    const auto c = center_of_mass(from_points(10, 10, {{7, 3}}));
    EXPECT_DOUBLE_EQ(c.x, 7.0);
    EXPECT_DOUBLE_EQ(c.y, 3.0);
}

TEST(CenterOfMass, TwoByTwoBlock) {
    const auto c = center_of_mass(filled_rect(4, 4, 0, 0, 2, 2));
    EXPECT_DOUBLE_EQ(c.x, 0.5);
    EXPECT_DOUBLE_EQ(c.y, 0.5);
}

TEST(CenterOfMass, ThreePoints) {
    const auto c = center_of_mass(from_points(3, 3, {{0, 0}, {2, 0}, {2, 2}}));
    EXPECT_DOUBLE_EQ(c.x, 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(c.y, 2.0 / 3.0);
}

TEST(CenterOfMass, EmptyThrows) {
    EXPECT_THROW(center_of_mass(BinaryShape(5, 5)), ShapeError);
}

TEST(CenterOfMass, TranslationEquivariantAndInBounds) {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 50; ++i) {
        BinaryShape s(40, 40);
        auto inner = random_shape(20, 20, 0.3, gen);
        inner.set(0, 0, true);
        for (int y = 0; y < 20; ++y) {
            for (int x = 0; x < 20; ++x) {
                s.set(x + 5, y + 5, inner.at(x, y));
            }
        }
        const int dx = static_cast<int>(gen() % 11) - 5;
        const int dy = static_cast<int>(gen() % 11) - 5;
        const auto c0 = center_of_mass(s);
        const auto c1 = center_of_mass(translate(s, dx, dy));
        EXPECT_DOUBLE_EQ(c1.x, c0.x + dx);
        EXPECT_DOUBLE_EQ(c1.y, c0.y + dy);
        const auto [bx, by] = brute_centroid(s);
        EXPECT_NEAR(c0.x, bx, 1e-12);
        EXPECT_NEAR(c0.y, by, 1e-12);
        EXPECT_GE(c0.x, 0.0);
        EXPECT_LT(c0.x, 40.0);
    }
}

TEST(Geometry, TranslateDropsPixelsLeavingTheGrid) {
    const auto s = filled_rect(5, 5, 3, 3, 2, 2);
    const auto t = translate(s, 1, 0);
    EXPECT_EQ(t.foreground_count(), 2u);
    EXPECT_TRUE(t.at(4, 3));
    EXPECT_FALSE(t.at(3, 3));
}

TEST(Geometry, ComplementAndSubset) {
    const auto s = filled_rect(6, 6, 1, 1, 3, 3);
    const auto c = complement(s);
    EXPECT_EQ(c.foreground_count(), 36u - 9u);
    EXPECT_DOUBLE_EQ(iou(s, c), 0.0);
    EXPECT_TRUE(is_subset(filled_rect(6, 6, 2, 2, 1, 1), s));
    EXPECT_FALSE(is_subset(s, filled_rect(6, 6, 2, 2, 1, 1)));
}

TEST(Geometry, BoundingBox) {
    const auto b = bounding_box(from_points(10, 10, {{2, 7}, {5, 1}}));
    EXPECT_EQ(b.x0, 2);
    EXPECT_EQ(b.x1, 5);
    EXPECT_EQ(b.y0, 1);
    EXPECT_EQ(b.y1, 7);
    EXPECT_TRUE(bounding_box(BinaryShape(3, 3)).empty());
}

TEST(Rng, DeterministicAndSeedSensitive) {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 10; ++i) {
        const auto va = a.next();
        EXPECT_EQ(va, b.next());
        EXPECT_NE(va, c.next());
    }
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seeds.insert(derive_seed(7, i));
    }
    EXPECT_EQ(seeds.size(), 1000u);
}

TEST(Rng, UniformBelowStaysInRangeAndCoversIt) {
    Rng r(1);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = r.uniform_below(7);
        ASSERT_LT(v, 7u);
        ++hits[v];
    }
    for (int h : hits) {
        EXPECT_GT(h, 850);
        EXPECT_LT(h, 1150);
    }
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

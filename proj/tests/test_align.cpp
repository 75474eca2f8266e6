#include "shapebench/align.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace shapebench;
using namespace shapebench::testing;

namespace {

// Sorted centroid distances, nearest-rank pick.
double oracle_percentile(const BinaryShape& s, double q) {
    const auto [cx, cy] = brute_centroid(s);
    std::vector<double> d;
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (s.at(x, y)) {
                d.push_back(std::hypot(x - cx, y - cy));
            }
        }
    }
    std::sort(d.begin(), d.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(d.size())));
    return d[rank - 1];
}

}  // namespace

TEST(RadialPercentile, SinglePixelIsZero) {
    EXPECT_DOUBLE_EQ(radial_percentile(from_points(9, 9, {{4, 4}}), 0.8), 0.0);
}

TEST(RadialPercentile, FourPointNearestRank) {
    // Centroid (3,4); distances 0, 3, 4, 5. ceil(0.8 * 4) - 1 = 3 picks 5.
    const auto s = from_points(10, 10, {{3, 4}, {6, 4}, {3, 8}, {0, 0}});
    const auto c = center_of_mass(s);
    ASSERT_DOUBLE_EQ(c.x, 3.0);
    ASSERT_DOUBLE_EQ(c.y, 4.0);
    EXPECT_DOUBLE_EQ(oracle_percentile(s, 0.8), 5.0);
    EXPECT_DOUBLE_EQ(radial_percentile(s, 0.8), 5.0);
    EXPECT_DOUBLE_EQ(radial_percentile(s, 0.75), 4.0);
    EXPECT_DOUBLE_EQ(radial_percentile(s, 0.5), 3.0);
}

TEST(RadialPercentile, FilledDiskApproachesAreaLaw) {
    for (double r : {20.0, 27.5, 45.0}) {
        const auto s = disk(128, 128, 64, 64, r);
        const double got = radial_percentile(s, 0.8);
        EXPECT_NEAR(got, r * std::sqrt(0.8), 0.03 * r * std::sqrt(0.8)) << "R=" << r;
        EXPECT_DOUBLE_EQ(got, oracle_percentile(s, 0.8));
    }
}

TEST(RadialPercentile, MatchesOracleOnRandomShapes) {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 40; ++i) {
        auto s = random_shape(23, 17, 0.4, gen);
        s.set(1, 1, true);
        for (double q : {0.1, 0.5, 0.8, 0.95}) {
            EXPECT_NEAR(radial_percentile(s, q), oracle_percentile(s, q), 1e-9);
        }
    }
}

TEST(RadialPercentile, Errors) {
    EXPECT_THROW(radial_percentile(BinaryShape(4, 4), 0.8), ShapeError);
    EXPECT_THROW(radial_percentile(from_points(4, 4, {{1, 1}}), 0.0), ShapeError);
    EXPECT_THROW(radial_percentile(from_points(4, 4, {{1, 1}}), 1.0), ShapeError);
}

TEST(CubicKernel, InterpolatesAndPartitionsUnity) {
    EXPECT_DOUBLE_EQ(cubic_kernel(0.0), 1.0);
    EXPECT_DOUBLE_EQ(cubic_kernel(1.0), 0.0);
    EXPECT_DOUBLE_EQ(cubic_kernel(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(cubic_kernel(2.0), 0.0);
    EXPECT_DOUBLE_EQ(cubic_kernel(2.5), 0.0);
    // Catmull-Rom at t = 0.5: (1.5 * 0.125) - (2.5 * 0.25) + 1 = 0.5625.
    EXPECT_DOUBLE_EQ(cubic_kernel(0.5), 0.5625);
    EXPECT_DOUBLE_EQ(cubic_kernel(1.5), -0.0625);
    for (double f : {0.1, 0.33, 0.5, 0.77}) {
        double sum = 0.0;
        for (int i = -2; i <= 2; ++i) {
            sum += cubic_kernel(f - i);
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(AlignmentParams, Validation) {
    AlignmentParams p;
    EXPECT_NO_THROW(p.validate());
    p.canvas = 0;
    EXPECT_THROW(p.validate(), ShapeError);
    p = {};
    p.target_radius = 0;
    EXPECT_THROW(p.validate(), ShapeError);
    p = {};
    p.percentile = 1.0;
    EXPECT_THROW(p.validate(), ShapeError);
    p = {};
    p.rebinarize_threshold = 0.0;
    EXPECT_THROW(p.validate(), ShapeError);
}

TEST(Align, DiskOfRadius45) {
    const auto s = disk(128, 128, 64, 64, 45);
    const double p80 = radial_percentile(s, 0.8);
    EXPECT_NEAR(p80, 40.2, 0.3);
    const auto out = align(s);
    ASSERT_EQ(out.width(), 128);
    ASSERT_EQ(out.height(), 128);
    const double expected_r = 45.0 * 40.0 / p80;
    EXPECT_NEAR(expected_r, 44.7, 0.2);
    const auto c = center_of_mass(out);
    const auto ref = disk(128, 128, std::round(c.x), std::round(c.y), expected_r);
    EXPECT_GE(iou(out, ref), 0.97);
}

TEST(Align, TranslationCancelsExactly) {
    std::mt19937_64 gen(8);
    for (int i = 0; i < 10; ++i) {
        const auto s = random_blob(160, 150, gen, 0.8);
        const auto a = align(s);
        EXPECT_EQ(align(translate(s, 10, -5)), a);
        EXPECT_EQ(align(translate(s, -7, 3)), a);
    }
}

TEST(Align, Errors) {
    EXPECT_THROW(align(BinaryShape(20, 20)), ShapeError);
    EXPECT_THROW(align(from_points(20, 20, {{5, 5}})), ShapeError);
}

TEST(Align, ContractOnRandomBlobs) {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> scale(0.5, 1.6);
    for (int i = 0; i < 20; ++i) {
        const int w = 80 + static_cast<int>(gen() % 120);
        const int h = 80 + static_cast<int>(gen() % 120);
        const auto s = random_blob(w, h, gen, scale(gen));
        const auto a = align(s);
        ASSERT_EQ(a.width(), 128);
        ASSERT_EQ(a.height(), 128);
        EXPECT_LE(std::abs(radial_percentile(a, 0.8) - 40.0), 2.0);
        const auto c = center_of_mass(a);
        EXPECT_LE(std::hypot(c.x - 64.0, c.y - 64.0), 1.0);
        EXPECT_GE(iou(align(a), a), 0.98);
    }
}

TEST(Align, CustomCanvasAndOddSize) {
    AlignmentParams p;
    p.canvas = 65;
    p.target_radius = 20;
    const auto out = align(disk(100, 90, 40, 50, 30), p);
    ASSERT_EQ(out.width(), 65);
    const auto c = center_of_mass(out);
    EXPECT_LE(std::abs(c.x - 32.0), 1.0);
    EXPECT_LE(std::abs(c.y - 32.0), 1.0);
}

TEST(Align, LargeShapesAreClippedNotRejected) {
    AlignmentParams p;
    p.canvas = 32;
    const auto out = align(disk(128, 128, 64, 64, 45), p);
    EXPECT_EQ(out.width(), 32);
    EXPECT_EQ(out.foreground_count(), 32u * 32u);
}

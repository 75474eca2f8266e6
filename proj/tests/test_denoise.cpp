#include "shapebench/denoise.hpp"
#include "shapebench/eigenshape.hpp"
#include "shapebench/morphology.hpp"
#include "shapebench/noise.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

using namespace shapebench;
using namespace shapebench::testing;

namespace {

// Cyclic Jacobi rotations on a small symmetric matrix; returns eigenvalues
// sorted descending.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a[p][q] * a[p][q];
            }
        }
        if (off < 1e-22) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) {
        ev[i] = a[i][i];
    }
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

std::vector<BinaryShape> ellipse_grid() {
    std::vector<BinaryShape> out;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 4; ++j) {
            out.push_back(ellipse(128, 128, 64, 64, 25.0 + 5.0 * i, 20.0 + 5.0 * j));
        }
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void expect_orthonormal(const EigenshapeModel& m) {
    for (int i = 0; i < m.num_components(); ++i) {
        for (int j = i; j < m.num_components(); ++j) {
            EXPECT_NEAR(dot(m.components[static_cast<std::size_t>(i)],
                            m.components[static_cast<std::size_t>(j)]),
                        i == j ? 1.0 : 0.0, 1e-6);
        }
    }
    for (std::size_t i = 1; i < m.variances.size(); ++i) {
        EXPECT_LE(m.variances[i], m.variances[i - 1]);
    }
}

}  // namespace

TEST(Eigenshape, IdenticalShapesGiveZeroVariance) {
    const auto s = disk(16, 16, 8, 8, 5);
    std::vector<BinaryShape> train(4, s);
    const auto m = train_eigenshape(train, 3);
    const auto v = vectorize(s);
    ASSERT_EQ(m.mean.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        EXPECT_DOUBLE_EQ(m.mean[i], v[i]);
    }
    for (double var : m.variances) {
        EXPECT_DOUBLE_EQ(var, 0.0);
    }
    expect_orthonormal(m);
    EXPECT_EQ(denoise_eigenshape(m, s, 3), s);
}

TEST(Eigenshape, TwoShapesSpanTheirDifference) {
    const auto a = disk(20, 20, 10, 10, 5);
    const auto b = filled_rect(20, 20, 3, 4, 12, 9);
    const std::vector<BinaryShape> train{a, b};
    const auto m = train_eigenshape(train, 1);
    const auto va = vectorize(a), vb = vectorize(b);
    std::vector<double> diff(va.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
        diff[i] = va[i] - vb[i];
    }
    const double norm = std::sqrt(dot(diff, diff));
    EXPECT_NEAR(std::abs(dot(diff, m.components[0])) / norm, 1.0, 1e-12);
    // Variance of two points: |a - b|^2 / 2.
    EXPECT_NEAR(m.variances[0], norm * norm / 2.0, 1e-9);
    EXPECT_EQ(denoise_eigenshape(m, a, 1), a);
    EXPECT_EQ(denoise_eigenshape(m, b, 1), b);
}

TEST(Eigenshape, EllipseFamilySpectrumMatchesJacobiOracle) {
    const auto shapes = ellipse_grid();
    const std::size_t n = shapes.size();
    const auto model = train_eigenshape(shapes, 19);
    expect_orthonormal(model);

    std::vector<std::vector<double>> x;
    for (const auto& s : shapes) {
        x.push_back(vectorize(s));
    }
    const std::size_t D = x[0].size();
    std::vector<double> mean(D, 0.0);
    for (const auto& v : x) {
        for (std::size_t i = 0; i < D; ++i) {
            mean[i] += v[i] / static_cast<double>(n);
        }
    }
    for (auto& v : x) {
        for (std::size_t i = 0; i < D; ++i) {
            v[i] -= mean[i];
        }
    }
    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            gram[i][j] = dot(x[i], x[j]);
        }
    }
    const auto ev = jacobi_eigenvalues(gram);
    double total = 0.0;
    for (double e : ev) {
        total += e;
    }
    for (std::size_t k = 0; k < 19; ++k) {
        EXPECT_NEAR(model.variances[k], ev[k] / static_cast<double>(n - 1),
                    1e-8 * total) << "k=" << k;
    }
    // Frozen value of the top-2 variance share for this grid.
    const double top2 = (ev[0] + ev[1]) / total;
    EXPECT_NEAR(top2, 0.6262847362409762, 1e-9);
    EXPECT_NEAR((model.variances[0] + model.variances[1]) * static_cast<double>(n - 1) / total,
                top2, 1e-9);
}

TEST(Eigenshape, FullRankModelReproducesTrainingShapes) {
    const auto shapes = ellipse_grid();
    const auto model = train_eigenshape(shapes, 19);
    for (const auto& s : shapes) {
        EXPECT_EQ(denoise_eigenshape(model, s, 19), s);
    }
}

TEST(Eigenshape, MeanIsAFixpoint) {
    const auto shapes = ellipse_grid();
    const auto model = train_eigenshape(shapes, 5);
    for (double c : project(model, model.mean, 5)) {
        EXPECT_NEAR(c, 0.0, 1e-9);
    }
    const auto rec = reconstruct(model, model.mean, 5);
    ASSERT_EQ(rec.size(), model.mean.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        ASSERT_NEAR(rec[i], model.mean[i], 1e-12);
        ASSERT_EQ(rec[i] >= 0.5, model.mean[i] >= 0.5);
    }
}

TEST(Eigenshape, RemovesSaltPepperNoise) {
    const auto shapes = ellipse_grid();
    const auto model = train_eigenshape(shapes, 5);
    for (std::size_t i = 0; i < shapes.size(); i += 4) {
        const auto noisy = salt_pepper(shapes[i], 0.1, 1000 + i);
        EXPECT_GT(iou(denoise_eigenshape(model, noisy, 5), shapes[i]), iou(noisy, shapes[i]));
    }
}

TEST(Eigenshape, ResidualNonIncreasingInComponents) {
    const auto shapes = ellipse_grid();
    const auto model = train_eigenshape(shapes, 19);
    const auto x = vectorize(salt_pepper(ellipse(128, 128, 60, 66, 33, 27), 0.05, 3));
    double prev = INFINITY;
    for (int k = 0; k <= 19; ++k) {
        const auto r = reconstruct(model, x, k);
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            err += (x[i] - r[i]) * (x[i] - r[i]);
        }
        EXPECT_LE(err, prev + 1e-9);
        prev = err;
    }
}

TEST(Eigenshape, RepeatedDenoisingSettles) {
    const auto shapes = ellipse_grid();
    const auto model = train_eigenshape(shapes, 5);
    const auto noisy = salt_pepper(shapes[7], 0.1, 77);
    const auto first = denoise_eigenshape(model, noisy, 5);
    const auto second = denoise_eigenshape(model, first, 5);
    const auto third = denoise_eigenshape(model, second, 5);
    EXPECT_EQ(third, second);
    const auto c1 = project(model, vectorize(second), 5);
    const auto c2 = project(model, vectorize(third), 5);
    for (std::size_t i = 0; i < c1.size(); ++i) {
        EXPECT_DOUBLE_EQ(c1[i], c2[i]);
    }
}

TEST(Eigenshape, Errors) {
    const auto s = disk(16, 16, 8, 8, 4);
    EXPECT_THROW(train_eigenshape(std::vector<BinaryShape>{s}, 1), ShapeError);
    EXPECT_THROW(train_eigenshape(std::vector<BinaryShape>{s, s}, 2), ShapeError);
    EXPECT_THROW(train_eigenshape(std::vector<BinaryShape>{s, s}, 0), ShapeError);
    EXPECT_THROW(train_eigenshape(std::vector<BinaryShape>{s, BinaryShape(8, 8)}, 1), ShapeError);
    EXPECT_THROW(train_eigenshape(std::vector<BinaryShape>{BinaryShape(8, 4), BinaryShape(8, 4)}, 1),
                 ShapeError);
    const auto m = train_eigenshape(std::vector<BinaryShape>{s, disk(16, 16, 7, 8, 5)}, 1);
    EXPECT_THROW(denoise_eigenshape(m, BinaryShape(8, 8), 1), ShapeError);
    EXPECT_THROW(denoise_eigenshape(m, s, 2), ShapeError);
    EXPECT_THROW(denoise_eigenshape(m, s, 0), ShapeError);
}

TEST(Eigenshape, ModelFileRoundTripsBitExactly) {
    TempDir dir("model");
    const auto shapes = ellipse_grid();
    const auto model = train_eigenshape(shapes, 6);
    const auto path = dir.path / "m.bin";
    save_model(model, path);
    EXPECT_EQ(std::filesystem::file_size(path), 16u + 8u * (16384u * 7u + 6u));
    const auto back = load_model(path);
    EXPECT_EQ(back.canvas, model.canvas);
    EXPECT_EQ(back.mean, model.mean);
    EXPECT_EQ(back.components, model.components);
    EXPECT_EQ(back.variances, model.variances);

    {
        std::ofstream bad(dir.path / "bad.bin", std::ios::binary);
        bad << "NOTAMODEL-------";
    }
    EXPECT_THROW(load_model(dir.path / "bad.bin"), ShapeError);
    std::filesystem::resize_file(path, 1000);
    EXPECT_THROW(load_model(path), ShapeError);
    EXPECT_THROW(load_model(dir.path / "missing.bin"), ShapeError);
}

TEST(Morphology, MatchesDefinitionOracle) {
    std::mt19937_64 gen(17);
    for (int i = 0; i < 20; ++i) {
        const auto s = random_shape(24, 19, 0.55, gen);
        for (int r : {0, 1, 2, 3}) {
            EXPECT_EQ(erode(s, r), brute_morph(s, r, false));
            EXPECT_EQ(dilate(s, r), brute_morph(s, r, true));
            EXPECT_EQ(opening(s, r), brute_morph(brute_morph(s, r, false), r, true));
        }
    }
    EXPECT_EQ(disk_offsets(1).size(), 5u);
    EXPECT_EQ(disk_offsets(2).size(), 13u);
    EXPECT_THROW(erode(BinaryShape(3, 3), -1), ShapeError);
}

TEST(Morphology, OpeningAndClosingLaws) {
    std::mt19937_64 gen(23);
    for (int i = 0; i < 20; ++i) {
        const auto s = random_blob(40, 40, gen);
        const auto n = salt_pepper(s, 0.1, static_cast<std::uint64_t>(i));
        for (int r : {1, 2}) {
            const auto o = opening(n, r);
            const auto c = closing(n, r);
            EXPECT_TRUE(is_subset(o, n));
            EXPECT_TRUE(is_subset(n, c));
            EXPECT_EQ(opening(o, r), o);
            EXPECT_EQ(closing(c, r), c);
        }
    }
}

TEST(MorphologicalDenoiser, RadiusZeroIsIdentity) {
    std::mt19937_64 gen(2);
    const auto s = random_shape(20, 20, 0.5, gen);
    EXPECT_EQ(denoise_morphological(s, 0), s);
}

TEST(MorphologicalDenoiser, RemovesIsolatedPixelKeepsSquare) {
    auto s = filled_rect(50, 50, 5, 5, 20, 20);
    s.set(34, 15, true);  // 10 px right of the square's edge
    const auto out = denoise_morphological(s, 1);
    EXPECT_FALSE(out.at(34, 15));
    const auto expected = brute_morph(
        brute_morph(brute_morph(brute_morph(s, 1, false), 1, true), 1, true), 1, false);
    EXPECT_EQ(out, expected);
    // Interior and edges survive; only the four corners are cut by the plus element.
    const auto square = filled_rect(50, 50, 5, 5, 20, 20);
    EXPECT_TRUE(is_subset(out, square));
    EXPECT_EQ(out.foreground_count(), 400u - 4u);
    EXPECT_FALSE(out.at(5, 5));
    EXPECT_TRUE(out.at(6, 5));
}

TEST(MorphologicalDenoiser, FillsSingleHole) {
    auto s = filled_rect(30, 30, 5, 5, 15, 15);
    s.set(12, 12, false);
    const auto out = denoise_morphological(s, 1);
    EXPECT_TRUE(out.at(12, 12));
}

TEST(MedianDenoiser, Examples) {
    std::mt19937_64 gen(4);
    const auto s = random_shape(15, 15, 0.5, gen);
    EXPECT_EQ(denoise_median(s, 1), s);

    auto solid = filled_rect(15, 15, 0, 0, 15, 15);
    EXPECT_EQ(denoise_median(solid, 5), solid);
    solid.set(7, 7, false);
    EXPECT_TRUE(denoise_median(solid, 3).at(7, 7));

    const BinaryShape empty(9, 9);
    EXPECT_EQ(denoise_median(empty, 3), empty);
    EXPECT_THROW(denoise_median(s, 4), ShapeError);
    EXPECT_THROW(denoise_median(s, 0), ShapeError);
}

TEST(MedianDenoiser, MatchesBruteForceWithForegroundTies) {
    std::mt19937_64 gen(31);
    for (int i = 0; i < 10; ++i) {
        const auto s = random_shape(17, 13, 0.5, gen);
        for (int win : {3, 5, 7}) {
            const int h = win / 2;
            BinaryShape expected(17, 13);
            for (int y = 0; y < 13; ++y) {
                for (int x = 0; x < 17; ++x) {
                    int ones = 0, total = 0;
                    for (int dy = -h; dy <= h; ++dy) {
                        for (int dx = -h; dx <= h; ++dx) {
                            if (s.contains(x + dx, y + dy)) {
                                ++total;
                                ones += s.at(x + dx, y + dy);
                            }
                        }
                    }
                    expected.set(x, y, 2 * ones >= total);
                }
            }
            EXPECT_EQ(denoise_median(s, win), expected);
        }
    }
    // Corner of a 3x3 window sees 2x2 pixels: a 2-2 split resolves to foreground.
    const auto tie = from_points(4, 4, {{0, 0}, {1, 0}});
    EXPECT_TRUE(denoise_median(tie, 3).at(0, 0));
    EXPECT_FALSE(denoise_median(tie, 3).at(1, 1));
}

TEST(Denoiser, ConfigAndFactory) {
    DenoiserConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.window = 2;
    EXPECT_THROW(cfg.validate(), ShapeError);
    cfg = {};
    cfg.struct_radius = -1;
    EXPECT_THROW(cfg.validate(), ShapeError);
    cfg = {};
    cfg.n_components = 0;
    EXPECT_THROW(cfg.validate(), ShapeError);

    EXPECT_EQ(parse_denoise_method("morph"), DenoiseMethod::morphological);
    EXPECT_FALSE(parse_denoise_method("unet"));
    for (auto m : {DenoiseMethod::identity, DenoiseMethod::eigenshape,
                   DenoiseMethod::morphological, DenoiseMethod::median}) {
        EXPECT_EQ(parse_denoise_method(to_string(m)), m);
    }

    std::mt19937_64 gen(9);
    const auto s = random_shape(16, 16, 0.4, gen);
    cfg = {};
    EXPECT_EQ(make_denoiser(cfg)(s), s);
    cfg.method = DenoiseMethod::median;
    EXPECT_EQ(make_denoiser(cfg)(s), denoise_median(s, 3));
    cfg.method = DenoiseMethod::morphological;
    EXPECT_EQ(make_denoiser(cfg)(s), denoise_morphological(s, 1));
    cfg.method = DenoiseMethod::eigenshape;
    EXPECT_THROW(make_denoiser(cfg), ShapeError);
    auto model = std::make_shared<const EigenshapeModel>(
        train_eigenshape(std::vector<BinaryShape>{s, complement(s), disk(16, 16, 8, 8, 4)}, 2));
    cfg.n_components = 2;
    EXPECT_EQ(make_denoiser(cfg, model)(s), denoise_eigenshape(*model, s, 2));
}

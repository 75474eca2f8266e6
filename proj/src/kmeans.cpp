#include "shapebench/kmeans.hpp"

#include "shapebench/core.hpp"
#include "shapebench/rng.hpp"

#include <limits>

namespace shapebench {

namespace {

double dist2(const Point3& a, const Point3& b) noexcept {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

int nearest(const Point3& p, const std::vector<Point3>& centers) noexcept {
    int best = 0;
    double best_d = dist2(p, centers[0]);
    for (std::size_t c = 1; c < centers.size(); ++c) {
        const double d = dist2(p, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

std::vector<Point3> seed_centers(std::span<const Point3> points, int k, Rng& rng) {
    std::vector<Point3> centers;
    centers.reserve(static_cast<std::size_t>(k));
    centers.push_back(points[rng.uniform_below(points.size())]);

    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        d2[i] = dist2(points[i], centers[0]);
    }
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (double v : d2) {
            total += v;
        }
        if (!(total > 0.0)) {
            throw ShapeError("kmeans: fewer distinct points than clusters");
        }
        const double target = rng.uniform01() * total;
        double acc = 0.0;
        std::size_t pick = points.size();
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (d2[i] <= 0.0) {
                continue;
            }
            acc += d2[i];
            pick = i;
            if (acc > target) {
                break;
            }
        }
        centers.push_back(points[pick]);
        for (std::size_t i = 0; i < points.size(); ++i) {
            d2[i] = std::min(d2[i], dist2(points[i], centers.back()));
        }
    }
    return centers;
}

}  // namespace

KMeansResult kmeans(std::span<const Point3> points, int k, std::uint64_t seed,
                    int max_iterations) {
    if (points.empty()) {
        throw ShapeError("kmeans: no points");
    }
    if (k < 1) {
        throw ShapeError("kmeans: k must be >= 1");
    }
    Rng rng(seed);
    KMeansResult res;
    res.centers = seed_centers(points, k, rng);
    res.labels.assign(points.size(), -1);

    const auto kk = static_cast<std::size_t>(k);
    for (int it = 0; it < max_iterations; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const int label = nearest(points[i], res.centers);
            if (label != res.labels[i]) {
                res.labels[i] = label;
                changed = true;
            }
        }
        res.iterations = it + 1;
        if (!changed) {
            res.converged = true;
            break;
        }
        std::vector<Point3> sums(kk, Point3{0.0, 0.0, 0.0});
        std::vector<std::size_t> counts(kk, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto c = static_cast<std::size_t>(res.labels[i]);
            for (int d = 0; d < 3; ++d) {
                sums[c][static_cast<std::size_t>(d)] += points[i][static_cast<std::size_t>(d)];
            }
            ++counts[c];
        }
        for (std::size_t c = 0; c < kk; ++c) {
            if (counts[c] == 0) {
                continue;
            }
            for (int d = 0; d < 3; ++d) {
                res.centers[c][static_cast<std::size_t>(d)] =
                    sums[c][static_cast<std::size_t>(d)] / static_cast<double>(counts[c]);
            }
        }
    }
    return res;
}

}  // namespace shapebench

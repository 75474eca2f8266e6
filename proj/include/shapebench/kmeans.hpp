#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace shapebench {

using Point3 = std::array<double, 3>;

struct KMeansResult {
    std::vector<Point3> centers;
    std::vector<int> labels;
    int iterations = 0;
    bool converged = false;
};

// k-means++ seeding followed by Lloyd iterations until the assignment stops
// changing or max_iterations is hit. Nearest-center ties go to the lower index;
// a cluster that empties keeps its previous center.
KMeansResult kmeans(std::span<const Point3> points, int k, std::uint64_t seed,
                    int max_iterations = 100);

}  // namespace shapebench

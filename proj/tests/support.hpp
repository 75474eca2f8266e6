// Shape builders and brute-force oracles shared by the test binaries.
#pragma once

#include "shapebench/core.hpp"
#include "shapebench/rng.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace shapebench::testing {

inline BinaryShape from_rows(const std::vector<std::string>& rows) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows.front().size());
    BinaryShape s(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            s.set(x, y, rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#');
        }
    }
    return s;
}

inline BinaryShape from_points(int w, int h, const std::vector<std::pair<int, int>>& pts) {
    BinaryShape s(w, h);
    for (auto [x, y] : pts) {
        s.set(x, y, true);
    }
    return s;
}

inline BinaryShape filled_rect(int w, int h, int x0, int y0, int rw, int rh) {
    BinaryShape s(w, h);
    for (int y = y0; y < y0 + rh; ++y) {
        for (int x = x0; x < x0 + rw; ++x) {
            if (s.contains(x, y)) {
                s.set(x, y, true);
            }
        }
    }
    return s;
}

inline BinaryShape ellipse(int w, int h, double cx, double cy, double a, double b) {
    BinaryShape s(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double u = (x - cx) / a;
            const double v = (y - cy) / b;
            s.set(x, y, u * u + v * v <= 1.0);
        }
    }
    return s;
}

inline BinaryShape disk(int w, int h, double cx, double cy, double r) {
    return ellipse(w, h, cx, cy, r, r);
}

inline BinaryShape random_shape(int w, int h, double density, std::mt19937_64& gen) {
    std::bernoulli_distribution on(density);
    BinaryShape s(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            s.set(x, y, on(gen));
        }
    }
    return s;
}

/// Union of a few overlapping ellipses around the image center: a smooth,
/// connected, irregular blob.
inline BinaryShape random_blob(int w, int h, std::mt19937_64& gen, double scale = 1.0) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    BinaryShape s(w, h);
    const int lobes = 2 + static_cast<int>(U(gen) * 3.0);
    const double base = 0.18 * std::min(w, h) * scale;
    for (int l = 0; l < lobes; ++l) {
        const double cx = w / 2.0 + (U(gen) - 0.5) * base;
        const double cy = h / 2.0 + (U(gen) - 0.5) * base;
        const double a = base * (0.6 + 0.8 * U(gen));
        const double b = base * (0.6 + 0.8 * U(gen));
        const double th = U(gen) * 3.14159265358979;
        const double c = std::cos(th), sn = std::sin(th);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double dx = x - cx, dy = y - cy;
                const double u = (c * dx + sn * dy) / a;
                const double v = (-sn * dx + c * dy) / b;
                if (u * u + v * v <= 1.0) {
                    s.set(x, y, true);
                }
            }
        }
    }
    return s;
}

inline std::size_t count_on(const BinaryShape& s) {
    std::size_t n = 0;
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            n += s.at(x, y) ? 1u : 0u;
        }
    }
    return n;
}

/// Double loop over the grid, no shortcuts.
inline double brute_iou(const BinaryShape& a, const BinaryShape& b) {
    long inter = 0, uni = 0;
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) {
            const bool p = a.at(x, y) != 0;
            const bool q = b.at(x, y) != 0;
            inter += (p && q) ? 1 : 0;
            uni += (p || q) ? 1 : 0;
        }
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline std::pair<double, double> brute_centroid(const BinaryShape& s) {
    double sx = 0, sy = 0, n = 0;
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (s.at(x, y)) {
                sx += x;
                sy += y;
                n += 1;
            }
        }
    }
    return {sx / n, sy / n};
}

// Erosion/dilation straight from the definitions with a disk element; pixels
// outside the grid are background.
inline BinaryShape brute_morph(const BinaryShape& s, int r, bool dilate) {
    BinaryShape out(s.width(), s.height());
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            bool any = false, all = true;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    if (dx * dx + dy * dy > r * r) {
                        continue;
                    }
                    const bool v = s.contains(x + dx, y + dy) && s.at(x + dx, y + dy);
                    any = any || v;
                    all = all && v;
                }
            }
            out.set(x, y, dilate ? any : all);
        }
    }
    return out;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        std::random_device rd;
        path = std::filesystem::temp_directory_path() /
               ("shapebench_" + tag + "_" + std::to_string(rd()) + "_" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace shapebench::testing

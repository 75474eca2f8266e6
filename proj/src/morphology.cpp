#include "shapebench/morphology.hpp"

#include <stdexcept>

namespace shapebench {

namespace {

void check_radius(int r) {
    if (r < 0) {
        throw ShapeError("morphology: structuring element radius must be >= 0");
    }
}

// Dilation: any structuring element hit. Erosion: no miss.
BinaryShape sweep(const BinaryShape& s, const std::vector<std::pair<int, int>>& se, bool dilation) {
    BinaryShape out(s.width(), s.height());
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            bool value = !dilation;
            for (const auto& [dx, dy] : se) {
                const int xx = x + dx;
                const int yy = y + dy;
                const bool on = s.contains(xx, yy) && s.at(xx, yy);
                if (dilation && on) {
                    value = true;
                    break;
                }
                if (!dilation && !on) {
                    value = false;
                    break;
                }
            }
            if (value) {
                out.set(x, y, true);
            }
        }
    }
    return out;
}

BinaryShape pad(const BinaryShape& s, int margin) {
    BinaryShape out(s.width() + 2 * margin, s.height() + 2 * margin);
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (s.at(x, y)) {
                out.set(x + margin, y + margin, true);
            }
        }
    }
    return out;
}

BinaryShape unpad(const BinaryShape& s, int margin, int width, int height) {
    BinaryShape out(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (s.at(x + margin, y + margin)) {
                out.set(x, y, true);
            }
        }
    }
    return out;
}

}  // namespace

std::vector<std::pair<int, int>> disk_offsets(int r) {
    check_radius(r);
    std::vector<std::pair<int, int>> se;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy <= r * r) {
                se.emplace_back(dx, dy);
            }
        }
    }
    return se;
}

BinaryShape erode(const BinaryShape& s, int r) {
    return sweep(s, disk_offsets(r), false);
}

BinaryShape dilate(const BinaryShape& s, int r) {
    return sweep(s, disk_offsets(r), true);
}

BinaryShape opening(const BinaryShape& s, int r) {
    // Erosion never leaves the grid, so the clipped dilation is exact.
    return dilate(erode(s, r), r);
}

BinaryShape closing(const BinaryShape& s, int r) {
    // The dilation may spill r pixels past the grid; keep it on a padded canvas
    // so the following erosion sees it.
    check_radius(r);
    const auto se = disk_offsets(r);
    const BinaryShape wide = pad(s, r);
    return unpad(sweep(sweep(wide, se, true), se, false), r, s.width(), s.height());
}

}  // namespace shapebench

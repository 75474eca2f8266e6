#include "shapebench/core.hpp"

#include <algorithm>

namespace shapebench {

namespace {

void check_dimensions(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ShapeError("BinaryShape: dimensions must be positive, got " +
                         std::to_string(width) + "x" + std::to_string(height));
    }
}

}  // namespace

BinaryShape::BinaryShape(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    check_dimensions(width, height);
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                   fill ? 1 : 0);
}

BinaryShape::BinaryShape(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dimensions(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw ShapeError("BinaryShape: pixel buffer size does not match dimensions");
    }
    for (auto& p : pixels_) {
        p = p ? 1 : 0;
    }
}

std::size_t BinaryShape::foreground_count() const noexcept {
    return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), std::uint8_t{1}));
}

ForegroundMoments foreground_moments(const BinaryShape& s) {
    ForegroundMoments m;
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (s.at(x, y)) {
                ++m.count;
                m.sum_x += x;
                m.sum_y += y;
            }
        }
    }
    return m;
}

Centroid center_of_mass(const BinaryShape& s) {
    const auto m = foreground_moments(s);
    if (m.count == 0) {
        throw ShapeError("center_of_mass: empty foreground");
    }
    const double n = static_cast<double>(m.count);
    return {static_cast<double>(m.sum_x) / n, static_cast<double>(m.sum_y) / n};
}

double iou(const BinaryShape& a, const BinaryShape& b) {
    if (!a.same_dimensions(b)) {
        throw ShapeError("iou: dimension mismatch (" + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()) + ")");
    }
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        inter += static_cast<std::size_t>(pa[i] & pb[i]);
        uni += static_cast<std::size_t>(pa[i] | pb[i]);
    }
    if (uni == 0) {
        return 1.0;
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryShape translate(const BinaryShape& s, int dx, int dy) {
    BinaryShape out(s.width(), s.height());
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (s.at(x, y) && out.contains(x + dx, y + dy)) {
                out.set(x + dx, y + dy, true);
            }
        }
    }
    return out;
}

BinaryShape complement(const BinaryShape& s) {
    std::vector<std::uint8_t> px(s.pixels().begin(), s.pixels().end());
    for (auto& p : px) {
        p = p ? 0 : 1;
    }
    return BinaryShape(s.width(), s.height(), std::move(px));
}

bool is_subset(const BinaryShape& inner, const BinaryShape& outer) {
    if (!inner.same_dimensions(outer)) {
        throw ShapeError("is_subset: dimension mismatch");
    }
    const auto a = inner.pixels();
    const auto b = outer.pixels();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && !b[i]) {
            return false;
        }
    }
    return true;
}

BoundingBox bounding_box(const BinaryShape& s) {
    BoundingBox box{s.width(), s.height(), -1, -1};
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (s.at(x, y)) {
                box.x0 = std::min(box.x0, x);
                box.y0 = std::min(box.y0, y);
                box.x1 = std::max(box.x1, x);
                box.y1 = std::max(box.y1, y);
            }
        }
    }
    if (box.x1 < 0) {
        return BoundingBox{};
    }
    return box;
}

}  // namespace shapebench

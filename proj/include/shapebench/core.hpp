/**
 * @file core.hpp
 * @brief Binary shape representation, foreground geometry and IoU.
 *
 * Coordinates are (x = column, y = row) with the origin at the top-left
 * pixel. In memory a foreground pixel is 1 and a background pixel is 0.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapebench {

/// Thrown when a precondition on shape data is violated.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A width x height grid of {0,1} pixels stored row-major.
class BinaryShape {
public:
    BinaryShape() = default;
    BinaryShape(int width, int height, std::uint8_t fill = 0);
    /// Takes ownership of row-major pixels; any nonzero value becomes 1.
    BinaryShape(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    void set(int x, int y, bool on) { pixels_[index(x, y)] = on ? 1 : 0; }
    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

    std::size_t foreground_count() const noexcept;
    bool same_dimensions(const BinaryShape& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    bool operator==(const BinaryShape&) const = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

struct Centroid {
    double x = 0.0;
    double y = 0.0;
};

/// Integer coordinate sums of the foreground. Kept exact so that integer
/// translations of a shape shift every derived quantity exactly.
struct ForegroundMoments {
    std::int64_t count = 0;
    std::int64_t sum_x = 0;
    std::int64_t sum_y = 0;
};

ForegroundMoments foreground_moments(const BinaryShape& s);

/// Arithmetic mean of the foreground coordinates. Throws ShapeError when the
/// foreground is empty.
Centroid center_of_mass(const BinaryShape& s);

/// |A ∩ B| / |A ∪ B|. Two empty foregrounds give 1, exactly one empty gives 0.
/// Throws ShapeError on a dimension mismatch.
double iou(const BinaryShape& a, const BinaryShape& b);

/// Shift all foreground pixels by (dx, dy); pixels leaving the grid are lost.
BinaryShape translate(const BinaryShape& s, int dx, int dy);

/// Pixelwise complement.
BinaryShape complement(const BinaryShape& s);

/// True when every foreground pixel of `inner` is foreground in `outer`.
bool is_subset(const BinaryShape& inner, const BinaryShape& outer);

struct BoundingBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = -1;  // inclusive
    int y1 = -1;  // inclusive
    int width() const noexcept { return x1 - x0 + 1; }
    int height() const noexcept { return y1 - y0 + 1; }
    bool empty() const noexcept { return x1 < x0 || y1 < y0; }
};

BoundingBox bounding_box(const BinaryShape& s);

}  // namespace shapebench

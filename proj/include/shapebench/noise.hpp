/**
 * @file noise.hpp
 * @brief Seeded noise processes that corrupt clean binary shapes.
 *
 * Every generator is a pure function of its inputs and seed.
 */
#pragma once

#include "shapebench/core.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shapebench {

enum class NoiseKind {
    salt_pepper,
    circle,
    real_image,
    occlusion,
    thresh_prob,
    detection_external,
};

std::string_view to_string(NoiseKind kind) noexcept;
/// Accepts the canonical names plus the short CLI aliases
/// (salt, real, thresh-prob, detection).
std::optional<NoiseKind> parse_noise_kind(std::string_view name);

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    bool operator==(const Rect&) const = default;
};

struct NoiseSpec {
    NoiseKind kind = NoiseKind::salt_pepper;
    double flip_prob = 0.0;         // salt_pepper
    int radius = 0;                 // circle
    std::optional<int> count;       // circle; unset means default_circle_count
    double threshold = 0.5;         // real_image, thresh_prob
    std::optional<Rect> rect;       // occlusion; unset means sample_occluder
    int clusters = 10;              // thresh_prob
    std::uint64_t seed = 0;

    /// Throws ShapeError on out-of-range fields.
    void validate() const;
    /// `key=value` pairs joined by ';' for the fields that apply to `kind`.
    std::string params_string() const;
};

/// Parses a params_string() back into the fields of `spec` (kind and seed are
/// left untouched). Unknown keys throw ShapeError.
void apply_params_string(NoiseSpec& spec, std::string_view params);

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    bool operator==(const Rgb&) const = default;
};

struct ColorImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;  // row-major

    ColorImage() = default;
    ColorImage(int w, int h, Rgb fill = {});
    const Rgb& at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    Rgb& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    /// Sub-image; throws ShapeError when the window leaves the image.
    ColorImage crop(int x, int y, int w, int h) const;
};

/// ITU-R 601 luma, 0.299 r + 0.587 g + 0.114 b, on the 0..255 scale.
double luma(const Rgb& c) noexcept;

struct ProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // row-major, each in [0, 1]

    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
};

/// Cluster labels are 0-based, in [0, k).
struct ClusterAssignment {
    int k = 0;
    std::vector<int> labels;  // row-major
    std::vector<std::size_t> fg_counts;
    std::vector<std::size_t> bg_counts;
};

BinaryShape salt_pepper(const BinaryShape& s, double p, std::uint64_t seed);

/// Foreground pixels with at least one 4-neighbor that is background or
/// outside the grid, in row-major order.
std::vector<std::pair<int, int>> boundary_pixels(const BinaryShape& s);

/// ceil(perimeter / (4 max(r,1))) where perimeter is the boundary pixel count.
int default_circle_count(const BinaryShape& s, int r);

/// Sets every pixel with (x-cx)^2 + (y-cy)^2 <= r^2 to `value`, clipped to the
/// grid. Returns the number of pixels whose value changed.
std::size_t stamp_disk(BinaryShape& s, int cx, int cy, int r, bool value);

/// `count` disks of radius r, each centered on a uniformly drawn boundary
/// pixel of the input shape and either added or punched by a fair coin.
BinaryShape circle_noise(const BinaryShape& s, int r, int count, std::uint64_t seed);

/// Background pixels whose patch luma / 255 >= t become foreground.
BinaryShape real_image_noise(const BinaryShape& s, const ColorImage& patch, double t);

/// Clears every pixel inside the rectangle (clipped to the grid).
BinaryShape occlusion_noise(const BinaryShape& s, const Rect& rect);

/// Axis-aligned occluder inside the foreground bounding box with side lengths
/// uniform in [ceil(0.2 side), ceil(0.6 side)].
Rect sample_occluder(const BinaryShape& s, std::uint64_t seed);

/// k-means over pixel colors followed by per-cluster foreground frequency.
std::pair<ProbabilityMap, ClusterAssignment> probability_map(const ColorImage& img,
                                                             const BinaryShape& mask, int k,
                                                             std::uint64_t seed);

/// Pixels with P >= t become foreground.
BinaryShape threshold_probability(const ProbabilityMap& pm, double t);

/// Images needed by the image-driven noise kinds.
struct NoiseInputs {
    const ColorImage* patch = nullptr;        // real_image
    const ColorImage* color_image = nullptr;  // thresh_prob
};

/// Dispatches on spec.kind. detection_external cannot be generated and throws.
BinaryShape apply_noise(const NoiseSpec& spec, const BinaryShape& clean,
                        const NoiseInputs& inputs = {});

/// Default level grids.
std::vector<double> default_flip_grid();       // 0, 0.01, ..., 0.15
std::vector<int> default_radius_grid();        // 0, 1, ..., 10
std::vector<double> default_real_thresholds(); // 10/255, 20/255, ..., 250/255

}  // namespace shapebench

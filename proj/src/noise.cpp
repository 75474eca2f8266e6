#include "shapebench/noise.hpp"

#include "shapebench/kmeans.hpp"
#include "shapebench/rng.hpp"
#include "shapebench/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapebench {

std::string_view to_string(NoiseKind kind) noexcept {
    switch (kind) {
        case NoiseKind::salt_pepper: return "salt_pepper";
        case NoiseKind::circle: return "circle";
        case NoiseKind::real_image: return "real_image";
        case NoiseKind::occlusion: return "occlusion";
        case NoiseKind::thresh_prob: return "thresh_prob";
        case NoiseKind::detection_external: return "detection_external";
    }
    return "unknown";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view name) {
    if (name == "salt_pepper" || name == "salt") return NoiseKind::salt_pepper;
    if (name == "circle") return NoiseKind::circle;
    if (name == "real_image" || name == "real") return NoiseKind::real_image;
    if (name == "occlusion") return NoiseKind::occlusion;
    if (name == "thresh_prob" || name == "thresh-prob") return NoiseKind::thresh_prob;
    if (name == "detection_external" || name == "detection") {
        return NoiseKind::detection_external;
    }
    return std::nullopt;
}

void NoiseSpec::validate() const {
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) {
        throw ShapeError("NoiseSpec: flip probability must lie in [0, 1]");
    }
    if (radius < 0) {
        throw ShapeError("NoiseSpec: radius must be >= 0");
    }
    if (count && *count < 0) {
        throw ShapeError("NoiseSpec: count must be >= 0");
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ShapeError("NoiseSpec: threshold must lie in [0, 1]");
    }
    if (clusters < 1) {
        throw ShapeError("NoiseSpec: clusters must be >= 1");
    }
    if (rect && (rect->w <= 0 || rect->h <= 0)) {
        throw ShapeError("NoiseSpec: occlusion rectangle must have positive size");
    }
}

std::string NoiseSpec::params_string() const {
    using text::format_number;
    switch (kind) {
        case NoiseKind::salt_pepper:
            return "p=" + format_number(flip_prob);
        case NoiseKind::circle: {
            std::string s = "r=" + std::to_string(radius);
            if (count) {
                s += ";count=" + std::to_string(*count);
            }
            return s;
        }
        case NoiseKind::real_image:
            return "t=" + format_number(threshold);
        case NoiseKind::occlusion:
            if (rect) {
                return "rect=" + std::to_string(rect->x) + "," + std::to_string(rect->y) + "," +
                       std::to_string(rect->w) + "," + std::to_string(rect->h);
            }
            return "";
        case NoiseKind::thresh_prob:
            return "k=" + std::to_string(clusters) + ";t=" + format_number(threshold);
        case NoiseKind::detection_external:
            return "";
    }
    return "";
}

void apply_params_string(NoiseSpec& spec, std::string_view params) {
    if (text::trim(params).empty()) {
        return;
    }
    for (const auto& item : text::split(params, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ShapeError("noise params: expected key=value, got '" + item + "'");
        }
        const std::string key(text::trim(std::string_view(item).substr(0, eq)));
        const std::string_view value = text::trim(std::string_view(item).substr(eq + 1));
        try {
            if (key == "p") {
                spec.flip_prob = text::parse_double(value);
            } else if (key == "r") {
                spec.radius = static_cast<int>(text::parse_int(value));
            } else if (key == "count") {
                spec.count = static_cast<int>(text::parse_int(value));
            } else if (key == "t") {
                spec.threshold = text::parse_double(value);
            } else if (key == "k") {
                spec.clusters = static_cast<int>(text::parse_int(value));
            } else if (key == "rect") {
                const auto parts = text::split(value, ',');
                if (parts.size() != 4) {
                    throw std::invalid_argument("rect needs x,y,w,h");
                }
                spec.rect = Rect{static_cast<int>(text::parse_int(parts[0])),
                                 static_cast<int>(text::parse_int(parts[1])),
                                 static_cast<int>(text::parse_int(parts[2])),
                                 static_cast<int>(text::parse_int(parts[3]))};
            } else {
                throw std::invalid_argument("unknown key");
            }
        } catch (const std::invalid_argument& e) {
            throw ShapeError("noise params: bad entry '" + item + "': " + e.what());
        }
    }
}

ColorImage::ColorImage(int w, int h, Rgb fill) : width(w), height(h) {
    if (w <= 0 || h <= 0) {
        throw ShapeError("ColorImage: dimensions must be positive");
    }
    pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

ColorImage ColorImage::crop(int x, int y, int w, int h) const {
    if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > width || y + h > height) {
        throw ShapeError("ColorImage::crop: window outside the image");
    }
    ColorImage out(w, h);
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            out.at(i, j) = at(x + i, y + j);
        }
    }
    return out;
}

double luma(const Rgb& c) noexcept {
    return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
}

BinaryShape salt_pepper(const BinaryShape& s, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ShapeError("salt_pepper: p must lie in [0, 1]");
    }
    Rng rng(seed);
    std::vector<std::uint8_t> px(s.pixels().begin(), s.pixels().end());
    for (auto& v : px) {
        if (rng.bernoulli(p)) {
            v ^= 1;
        }
    }
    return BinaryShape(s.width(), s.height(), std::move(px));
}

std::vector<std::pair<int, int>> boundary_pixels(const BinaryShape& s) {
    std::vector<std::pair<int, int>> out;
    auto bg = [&s](int x, int y) { return !s.contains(x, y) || !s.at(x, y); };
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (s.at(x, y) && (bg(x - 1, y) || bg(x + 1, y) || bg(x, y - 1) || bg(x, y + 1))) {
                out.emplace_back(x, y);
            }
        }
    }
    return out;
}

int default_circle_count(const BinaryShape& s, int r) {
    const auto perimeter = static_cast<long long>(boundary_pixels(s).size());
    const long long denom = 4LL * std::max(r, 1);
    return static_cast<int>((perimeter + denom - 1) / denom);
}

std::size_t stamp_disk(BinaryShape& s, int cx, int cy, int r, bool value) {
    std::size_t changed = 0;
    const long long r2 = static_cast<long long>(r) * r;
    for (int y = std::max(0, cy - r); y <= std::min(s.height() - 1, cy + r); ++y) {
        for (int x = std::max(0, cx - r); x <= std::min(s.width() - 1, cx + r); ++x) {
            const long long dx = x - cx;
            const long long dy = y - cy;
            if (dx * dx + dy * dy <= r2 && (s.at(x, y) != 0) != value) {
                s.set(x, y, value);
                ++changed;
            }
        }
    }
    return changed;
}

BinaryShape circle_noise(const BinaryShape& s, int r, int count, std::uint64_t seed) {
    if (r < 0 || count < 0) {
        throw ShapeError("circle_noise: radius and count must be >= 0");
    }
    const auto boundary = boundary_pixels(s);
    if (boundary.empty()) {
        throw ShapeError("circle_noise: shape has no boundary pixels");
    }
    Rng rng(seed);
    BinaryShape out = s;
    for (int i = 0; i < count; ++i) {
        const auto& [cx, cy] = boundary[rng.uniform_below(boundary.size())];
        const bool add = rng.bernoulli(0.5);
        stamp_disk(out, cx, cy, r, add);
    }
    return out;
}

BinaryShape real_image_noise(const BinaryShape& s, const ColorImage& patch, double t) {
    if (patch.width != s.width() || patch.height != s.height()) {
        throw ShapeError("real_image_noise: patch dimensions do not match the shape");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ShapeError("real_image_noise: threshold must lie in [0, 1]");
    }
    BinaryShape out = s;
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (!s.at(x, y) && luma(patch.at(x, y)) / 255.0 >= t) {
                out.set(x, y, true);
            }
        }
    }
    return out;
}

BinaryShape occlusion_noise(const BinaryShape& s, const Rect& rect) {
    if (rect.w <= 0 || rect.h <= 0) {
        throw ShapeError("occlusion_noise: degenerate rectangle");
    }
    const int x0 = std::max(rect.x, 0);
    const int y0 = std::max(rect.y, 0);
    const int x1 = std::min(rect.x + rect.w, s.width());
    const int y1 = std::min(rect.y + rect.h, s.height());
    if (x0 >= x1 || y0 >= y1) {
        throw ShapeError("occlusion_noise: rectangle does not intersect the canvas");
    }
    BinaryShape out = s;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            out.set(x, y, false);
        }
    }
    return out;
}

Rect sample_occluder(const BinaryShape& s, std::uint64_t seed) {
    const BoundingBox box = bounding_box(s);
    if (box.empty()) {
        throw ShapeError("sample_occluder: empty foreground");
    }
    Rng rng(seed);
    auto side = [&rng](int extent) {
        const int lo = std::max(1, static_cast<int>(std::ceil(0.2 * extent)));
        const int hi = std::min(extent, std::max(lo, static_cast<int>(std::ceil(0.6 * extent))));
        return static_cast<int>(rng.uniform_int(lo, std::max(lo, hi)));
    };
    Rect r;
    r.w = side(box.width());
    r.h = side(box.height());
    r.x = static_cast<int>(rng.uniform_int(box.x0, box.x1 - r.w + 1));
    r.y = static_cast<int>(rng.uniform_int(box.y0, box.y1 - r.h + 1));
    return r;
}

std::pair<ProbabilityMap, ClusterAssignment> probability_map(const ColorImage& img,
                                                             const BinaryShape& mask, int k,
                                                             std::uint64_t seed) {
    if (img.pixels.empty()) {
        throw ShapeError("probability_map: empty image");
    }
    if (img.width != mask.width() || img.height != mask.height()) {
        throw ShapeError("probability_map: image and mask dimensions differ");
    }
    if (k < 1) {
        throw ShapeError("probability_map: k must be >= 1");
    }
    std::vector<std::uint32_t> packed;
    packed.reserve(img.pixels.size());
    for (const auto& c : img.pixels) {
        packed.push_back((std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b);
    }
    std::sort(packed.begin(), packed.end());
    const auto distinct =
        static_cast<std::size_t>(std::unique(packed.begin(), packed.end()) - packed.begin());
    if (static_cast<std::size_t>(k) > distinct) {
        throw ShapeError("probability_map: k = " + std::to_string(k) + " exceeds the " +
                         std::to_string(distinct) + " distinct colors");
    }

    std::vector<Point3> points;
    points.reserve(img.pixels.size());
    for (const auto& c : img.pixels) {
        points.push_back({double(c.r), double(c.g), double(c.b)});
    }
    const KMeansResult km = kmeans(points, k, seed);

    ClusterAssignment ca;
    ca.k = k;
    ca.labels = km.labels;
    ca.fg_counts.assign(static_cast<std::size_t>(k), 0);
    ca.bg_counts.assign(static_cast<std::size_t>(k), 0);
    const auto mp = mask.pixels();
    for (std::size_t i = 0; i < ca.labels.size(); ++i) {
        const auto c = static_cast<std::size_t>(ca.labels[i]);
        if (mp[i]) {
            ++ca.fg_counts[c];
        } else {
            ++ca.bg_counts[c];
        }
    }

    ProbabilityMap pm;
    pm.width = img.width;
    pm.height = img.height;
    pm.values.resize(ca.labels.size());
    for (std::size_t i = 0; i < ca.labels.size(); ++i) {
        const auto c = static_cast<std::size_t>(ca.labels[i]);
        pm.values[i] = static_cast<double>(ca.fg_counts[c]) /
                       static_cast<double>(ca.fg_counts[c] + ca.bg_counts[c]);
    }
    return {std::move(pm), std::move(ca)};
}

BinaryShape threshold_probability(const ProbabilityMap& pm, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ShapeError("threshold_probability: t must lie in [0, 1]");
    }
    std::vector<std::uint8_t> px(pm.values.size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = pm.values[i] >= t ? 1 : 0;
    }
    return BinaryShape(pm.width, pm.height, std::move(px));
}

BinaryShape apply_noise(const NoiseSpec& spec, const BinaryShape& clean,
                        const NoiseInputs& inputs) {
    spec.validate();
    switch (spec.kind) {
        case NoiseKind::salt_pepper:
            return salt_pepper(clean, spec.flip_prob, spec.seed);
        case NoiseKind::circle: {
            const int count = spec.count ? *spec.count : default_circle_count(clean, spec.radius);
            return circle_noise(clean, spec.radius, count, spec.seed);
        }
        case NoiseKind::real_image:
            if (inputs.patch == nullptr) {
                throw ShapeError("real_image noise needs a color patch");
            }
            return real_image_noise(clean, *inputs.patch, spec.threshold);
        case NoiseKind::occlusion: {
            const Rect r = spec.rect ? *spec.rect : sample_occluder(clean, spec.seed);
            return occlusion_noise(clean, r);
        }
        case NoiseKind::thresh_prob: {
            if (inputs.color_image == nullptr) {
                throw ShapeError("thresholded probability noise needs the color image");
            }
            const auto [pm, ca] =
                probability_map(*inputs.color_image, clean, spec.clusters, spec.seed);
            return threshold_probability(pm, spec.threshold);
        }
        case NoiseKind::detection_external:
            throw ShapeError("detection noise is not generated; ingest predicted masks instead");
    }
    throw ShapeError("apply_noise: unknown noise kind");
}

std::vector<double> default_flip_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 15; ++i) {
        g.push_back(i / 100.0);
    }
    return g;
}

std::vector<int> default_radius_grid() {
    std::vector<int> g;
    for (int r = 0; r <= 10; ++r) {
        g.push_back(r);
    }
    return g;
}

std::vector<double> default_real_thresholds() {
    std::vector<double> g;
    for (int i = 10; i <= 250; i += 10) {
        g.push_back(i / 255.0);
    }
    return g;
}

}  // namespace shapebench

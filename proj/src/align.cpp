#include "shapebench/align.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace shapebench {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

// Nearest integer to a/b, halves rounded up.
std::int64_t round_div(std::int64_t a, std::int64_t b) {
    return floor_div(2 * a + b, 2 * b);
}

struct Tap {
    int base = 0;  // source index of the first of four taps
    std::array<double, 4> w{};
};

// Sampling taps for one output axis. `anchor_int + anchor_frac` is the source
// coordinate of output index 0.
std::vector<Tap> build_taps(long long first, long long count, std::int64_t anchor_int,
                            double anchor_frac, double scale) {
    std::vector<Tap> taps(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        const double rel = anchor_frac + static_cast<double>(first + k) / scale;
        const double fl = std::floor(rel);
        const double t = rel - fl;
        Tap& tap = taps[static_cast<std::size_t>(k)];
        tap.base = static_cast<int>(anchor_int + static_cast<std::int64_t>(fl)) - 1;
        tap.w = {cubic_kernel(1.0 + t), cubic_kernel(t), cubic_kernel(1.0 - t),
                 cubic_kernel(2.0 - t)};
    }
    return taps;
}

}  // namespace

void AlignmentParams::validate() const {
    if (canvas <= 0) {
        throw ShapeError("AlignmentParams: canvas must be > 0");
    }
    if (!(target_radius > 0.0)) {
        throw ShapeError("AlignmentParams: target_radius must be > 0");
    }
    if (!(percentile > 0.0 && percentile < 1.0)) {
        throw ShapeError("AlignmentParams: percentile must lie in (0, 1)");
    }
    if (!(rebinarize_threshold > 0.0 && rebinarize_threshold < 1.0)) {
        throw ShapeError("AlignmentParams: rebinarize_threshold must lie in (0, 1)");
    }
}

double cubic_kernel(double t) noexcept {
    constexpr double a = -0.5;
    const double x = std::abs(t);
    if (x <= 1.0) {
        return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    }
    if (x < 2.0) {
        return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    }
    return 0.0;
}

double radial_percentile(const BinaryShape& s, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw ShapeError("radial_percentile: q must lie in (0, 1)");
    }
    const ForegroundMoments m = foreground_moments(s);
    if (m.count == 0) {
        throw ShapeError("radial_percentile: empty foreground");
    }
    // (x - mean) * N is an exact integer, invariant under integer translation.
    const double inv_n = 1.0 / static_cast<double>(m.count);
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(m.count));
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (s.at(x, y)) {
                const auto ex = static_cast<double>(x * m.count - m.sum_x);
                const auto ey = static_cast<double>(y * m.count - m.sum_y);
                d.push_back(std::hypot(ex, ey) * inv_n);
            }
        }
    }
    const double n = static_cast<double>(d.size());
    // Guard against q*n landing a hair above an integer (0.8 * 5 etc.).
    auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, d.size());
    auto nth = d.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(d.begin(), nth, d.end());
    return *nth;
}

BinaryShape align(const BinaryShape& s, const AlignmentParams& p) {
    p.validate();
    const ForegroundMoments m = foreground_moments(s);
    if (m.count == 0) {
        throw ShapeError("align: empty foreground");
    }
    const double radius = radial_percentile(s, p.percentile);
    if (!(radius > 0.0)) {
        throw ShapeError("align: percentile radius is zero, scale factor undefined");
    }
    const double scale = p.target_radius / radius;

    // Exact split of the centroid into integer and fractional parts.
    const std::int64_t cx_int = floor_div(m.sum_x, m.count);
    const std::int64_t cy_int = floor_div(m.sum_y, m.count);
    const double cx_frac =
        static_cast<double>(m.sum_x - cx_int * m.count) / static_cast<double>(m.count);
    const double cy_frac =
        static_cast<double>(m.sum_y - cy_int * m.count) / static_cast<double>(m.count);
    const double cx = static_cast<double>(cx_int) + cx_frac;
    const double cy = static_cast<double>(cy_int) + cy_frac;

    // Rescaled pixels whose sample position lies inside the source extent.
    const auto u_lo = static_cast<long long>(std::ceil((-0.5 - cx) * scale));
    const auto u_hi = static_cast<long long>(std::floor((s.width() - 0.5 - cx) * scale));
    const auto v_lo = static_cast<long long>(std::ceil((-0.5 - cy) * scale));
    const auto v_hi = static_cast<long long>(std::floor((s.height() - 0.5 - cy) * scale));
    const long long nu = std::max(0LL, u_hi - u_lo + 1);
    const long long nv = std::max(0LL, v_hi - v_lo + 1);
    if (nu == 0 || nv == 0) {
        throw ShapeError("align: rescaled image is empty");
    }

    const auto xtaps = build_taps(u_lo, nu, cx_int, cx_frac, scale);
    const auto ytaps = build_taps(v_lo, nv, cy_int, cy_frac, scale);
    const int w = s.width();
    const int h = s.height();
    auto clamp_x = [w](int x) { return std::clamp(x, 0, w - 1); };
    auto clamp_y = [h](int y) { return std::clamp(y, 0, h - 1); };

    // Horizontal pass: every source row resampled to nu columns.
    std::vector<double> rows(static_cast<std::size_t>(nu) * static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) {
        for (long long u = 0; u < nu; ++u) {
            const Tap& tap = xtaps[static_cast<std::size_t>(u)];
            double acc = 0.0;
            for (int i = 0; i < 4; ++i) {
                acc += tap.w[static_cast<std::size_t>(i)] * s.at(clamp_x(tap.base + i), y);
            }
            rows[static_cast<std::size_t>(y) * static_cast<std::size_t>(nu) +
                 static_cast<std::size_t>(u)] = acc;
        }
    }

    // Vertical pass and re-binarization.
    std::vector<std::uint8_t> rescaled(static_cast<std::size_t>(nu) *
                                       static_cast<std::size_t>(nv));
    std::int64_t count = 0;
    std::int64_t sum_u = 0;
    std::int64_t sum_v = 0;
    for (long long v = 0; v < nv; ++v) {
        const Tap& tap = ytaps[static_cast<std::size_t>(v)];
        for (long long u = 0; u < nu; ++u) {
            double acc = 0.0;
            for (int j = 0; j < 4; ++j) {
                acc += tap.w[static_cast<std::size_t>(j)] *
                       rows[static_cast<std::size_t>(clamp_y(tap.base + j)) *
                                static_cast<std::size_t>(nu) +
                            static_cast<std::size_t>(u)];
            }
            if (acc >= p.rebinarize_threshold) {
                rescaled[static_cast<std::size_t>(v * nu + u)] = 1;
                ++count;
                sum_u += u;
                sum_v += v;
            }
        }
    }
    if (count == 0) {
        throw ShapeError("align: foreground vanished after rescaling");
    }

    // Crop/pad so the canvas center pixel lands on the rounded new centroid.
    const std::int64_t center_u = round_div(sum_u, count);
    const std::int64_t center_v = round_div(sum_v, count);
    const int half = p.canvas / 2;
    BinaryShape out(p.canvas, p.canvas);
    for (int j = 0; j < p.canvas; ++j) {
        const std::int64_t v = center_v + (j - half);
        if (v < 0 || v >= nv) {
            continue;
        }
        for (int i = 0; i < p.canvas; ++i) {
            const std::int64_t u = center_u + (i - half);
            if (u < 0 || u >= nu) {
                continue;
            }
            if (rescaled[static_cast<std::size_t>(v * nu + u)]) {
                out.set(i, j, true);
            }
        }
    }
    return out;
}

}  // namespace shapebench

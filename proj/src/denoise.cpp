#include "shapebench/denoise.hpp"

#include "shapebench/morphology.hpp"

#include <algorithm>
#include <vector>

namespace shapebench {

std::string_view to_string(DenoiseMethod m) noexcept {
    switch (m) {
        case DenoiseMethod::identity: return "identity";
        case DenoiseMethod::eigenshape: return "eigenshape";
        case DenoiseMethod::morphological: return "morphological";
        case DenoiseMethod::median: return "median";
    }
    return "unknown";
}

std::optional<DenoiseMethod> parse_denoise_method(std::string_view name) {
    if (name == "identity") return DenoiseMethod::identity;
    if (name == "eigenshape") return DenoiseMethod::eigenshape;
    if (name == "morphological" || name == "morph") return DenoiseMethod::morphological;
    if (name == "median") return DenoiseMethod::median;
    return std::nullopt;
}

void DenoiserConfig::validate() const {
    if (n_components < 1) {
        throw ShapeError("DenoiserConfig: n_components must be >= 1");
    }
    if (struct_radius < 0) {
        throw ShapeError("DenoiserConfig: struct_radius must be >= 0");
    }
    if (window < 1 || window % 2 == 0) {
        throw ShapeError("DenoiserConfig: window must be odd and >= 1");
    }
    if (!(rebinarize_threshold > 0.0 && rebinarize_threshold < 1.0)) {
        throw ShapeError("DenoiserConfig: rebinarize_threshold must lie in (0, 1)");
    }
}

BinaryShape denoise_morphological(const BinaryShape& noisy, int struct_radius) {
    return closing(opening(noisy, struct_radius), struct_radius);
}

BinaryShape denoise_median(const BinaryShape& noisy, int window) {
    if (window < 1 || window % 2 == 0) {
        throw ShapeError("denoise_median: window must be odd and >= 1, got " +
                         std::to_string(window));
    }
    const int w = noisy.width();
    const int h = noisy.height();
    // Summed-area table with a zero border row/column.
    std::vector<int> sat(static_cast<std::size_t>(w + 1) * static_cast<std::size_t>(h + 1), 0);
    auto at = [&sat, w](int x, int y) -> int& {
        return sat[static_cast<std::size_t>(y) * static_cast<std::size_t>(w + 1) +
                   static_cast<std::size_t>(x)];
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            at(x + 1, y + 1) = noisy.at(x, y) + at(x, y + 1) + at(x + 1, y) - at(x, y);
        }
    }
    const int half = window / 2;
    BinaryShape out(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - half);
        const int y1 = std::min(h, y + half + 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - half);
            const int x1 = std::min(w, x + half + 1);
            const int ones = at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
            const int total = (x1 - x0) * (y1 - y0);
            if (2 * ones >= total) {
                out.set(x, y, true);
            }
        }
    }
    return out;
}

Denoiser make_denoiser(const DenoiserConfig& cfg, std::shared_ptr<const EigenshapeModel> model) {
    cfg.validate();
    switch (cfg.method) {
        case DenoiseMethod::identity:
            return [](const BinaryShape& s) { return s; };
        case DenoiseMethod::eigenshape:
            if (!model) {
                throw ShapeError("eigenshape denoiser needs a trained model");
            }
            if (cfg.n_components > model->num_components()) {
                throw ShapeError("eigenshape denoiser: n_components " +
                                 std::to_string(cfg.n_components) + " exceeds model's " +
                                 std::to_string(model->num_components()));
            }
            return [model, n = cfg.n_components, t = cfg.rebinarize_threshold](
                       const BinaryShape& s) { return denoise_eigenshape(*model, s, n, t); };
        case DenoiseMethod::morphological:
            return [r = cfg.struct_radius](const BinaryShape& s) {
                return denoise_morphological(s, r);
            };
        case DenoiseMethod::median:
            return [w = cfg.window](const BinaryShape& s) { return denoise_median(s, w); };
    }
    throw ShapeError("make_denoiser: unknown method");
}

}  // namespace shapebench

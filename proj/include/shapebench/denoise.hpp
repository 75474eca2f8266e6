/**
 * @file denoise.hpp
 * @brief Baseline denoisers mapping a noisy shape to a denoised shape.
 */
#pragma once

#include "shapebench/core.hpp"
#include "shapebench/eigenshape.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string_view>

namespace shapebench {

enum class DenoiseMethod { identity, eigenshape, morphological, median };

std::string_view to_string(DenoiseMethod m) noexcept;
std::optional<DenoiseMethod> parse_denoise_method(std::string_view name);

struct DenoiserConfig {
    DenoiseMethod method = DenoiseMethod::identity;
    int n_components = 5;
    int struct_radius = 1;
    int window = 3;
    double rebinarize_threshold = 0.5;

    void validate() const;
};

/// Opening followed by closing with a disk of the given radius.
BinaryShape denoise_morphological(const BinaryShape& noisy, int struct_radius);

/// Majority vote over the window x window neighborhood clipped to the grid;
/// ties (only possible on clipped windows) go to foreground.
BinaryShape denoise_median(const BinaryShape& noisy, int window);

using Denoiser = std::function<BinaryShape(const BinaryShape&)>;

/// Builds a callable for the configured method. The eigenshape method needs a
/// model whose lifetime the callable shares.
Denoiser make_denoiser(const DenoiserConfig& cfg,
                       std::shared_ptr<const EigenshapeModel> model = nullptr);

}  // namespace shapebench

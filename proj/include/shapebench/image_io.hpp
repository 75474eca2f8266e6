/**
 * @file image_io.hpp
 * @brief Mask and color image files.
 *
 * Readers sniff the file signature and accept PNG and the Netpbm formats
 * (P2/P5 graymap, P3/P6 pixmap). Writers pick PNG for a `.png` extension and
 * binary Netpbm (P5 / P6) otherwise. Masks are stored as 8-bit single-channel
 * images with foreground 255 and background 0.
 */
#pragma once

#include "shapebench/core.hpp"
#include "shapebench/noise.hpp"

#include <filesystem>
#include <stdexcept>

namespace shapebench {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pixels >= 128 become foreground. Multi-channel files are accepted only if
/// every pixel has equal channels. Throws IoError.
BinaryShape load_mask(const std::filesystem::path& path);

/// Throws IoError with the path on failure.
void save_mask(const BinaryShape& shape, const std::filesystem::path& path);

/// Gray files are expanded to equal channels. Throws IoError.
ColorImage load_color_image(const std::filesystem::path& path);
void save_color_image(const ColorImage& img, const std::filesystem::path& path);

/// Raw 8-bit gray data for tests and tools that need values other than 0/255.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};
void save_gray_image(const GrayImage& img, const std::filesystem::path& path);

}  // namespace shapebench

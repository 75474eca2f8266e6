/**
 * @file manifest.hpp
 * @brief UTF-8 CSV manifest linking clean masks, noisy masks and noise settings.
 *
 * Header (fixed):
 *
 *   item_id,split,clean_path,noisy_path,noise_kind,noise_params,seed,input_iou
 *
 * Paths are written relative to the manifest's directory and resolved against
 * it on read. noise_params holds `key=value` pairs joined by ';'. noisy_path
 * and input_iou may be empty.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shapebench {

struct ManifestRow {
    std::string item_id;
    std::string split;  // "train" or "test"
    std::filesystem::path clean_path;
    std::filesystem::path noisy_path;  // empty when absent
    std::string noise_kind;
    std::string noise_params;
    std::uint64_t seed = 0;
    std::optional<double> input_iou;
};

struct Manifest {
    std::vector<ManifestRow> rows;

    /// Throws std::invalid_argument naming the first duplicated
    /// (split, noise_kind, noise_params, seed, item_id) key or bad split.
    void validate() const;
};

inline constexpr std::string_view kManifestHeader =
    "item_id,split,clean_path,noisy_path,noise_kind,noise_params,seed,input_iou";

/// Parses a manifest; relative paths are resolved against the file's directory.
/// With `check_paths`, every clean_path and noisy_path must exist.
/// Errors name the offending line.
Manifest read_manifest(const std::filesystem::path& path, bool check_paths = true);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// RFC 4180 field splitting of one CSV line.
std::vector<std::string> parse_csv_line(std::string_view line);

}  // namespace shapebench

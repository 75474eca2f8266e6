/**
 * @file eigenshape.hpp
 * @brief PCA subspace model over vectorized binary shapes.
 *
 * Training uses the dual (Gram matrix) formulation: with n training shapes of
 * D pixels and n << D, the n x n matrix Xc Xc^T is eigendecomposed and each
 * component is recovered as Xc^T v / sqrt(lambda).
 *
 * Model file layout (all integers and floats little-endian):
 *
 *   offset  size        field
 *   0       8           magic "SHBEIGN1"
 *   8       4           canvas (uint32); D = canvas * canvas
 *   12      4           m, number of components (uint32)
 *   16      8 D         mean, float64, row-major pixels
 *   ...     8 m D       components, float64, component-major then row-major
 *   ...     8 m         variances, float64, non-increasing
 */
#pragma once

#include "shapebench/core.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace shapebench {

struct EigenshapeModel {
    int canvas = 0;
    std::vector<double> mean;                     // D
    std::vector<std::vector<double>> components;  // m x D, orthonormal
    std::vector<double> variances;                // m, non-increasing

    std::size_t dimension() const noexcept { return mean.size(); }
    int num_components() const noexcept { return static_cast<int>(components.size()); }
};

/// Fits the top-m principal components of the training shapes. Directions with
/// zero variance are completed with orthonormalized unit pixel vectors so that
/// the component set stays orthonormal.
/// Throws ShapeError if n < 2, shapes are not square or differ in size, or m is
/// outside [1, min(n-1, D)].
EigenshapeModel train_eigenshape(std::span<const BinaryShape> train, int m);

/// Pre-threshold reconstruction mean + sum_{j<n} <x - mean, c_j> c_j.
std::vector<double> reconstruct(const EigenshapeModel& model, std::span<const double> x,
                                int n_components);

/// Projection coefficients <x - mean, c_j> for j < n_components.
std::vector<double> project(const EigenshapeModel& model, std::span<const double> x,
                            int n_components);

std::vector<double> vectorize(const BinaryShape& s);

/// Reconstruct and keep pixels with value >= threshold.
BinaryShape denoise_eigenshape(const EigenshapeModel& model, const BinaryShape& noisy,
                               int n_components, double threshold = 0.5);

void save_model(const EigenshapeModel& model, const std::filesystem::path& path);
EigenshapeModel load_model(const std::filesystem::path& path);

}  // namespace shapebench

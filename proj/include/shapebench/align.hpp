/**
 * @file align.hpp
 * @brief Translation/scale canonicalization of binary masks.
 *
 * A raw mask is rescaled so that the 80th percentile of foreground distances
 * to the centroid becomes `target_radius`, re-binarized, and cropped (or
 * padded) to a square canvas centered on the new centroid.
 */
#pragma once

#include "shapebench/core.hpp"

namespace shapebench {

struct AlignmentParams {
    int canvas = 128;
    double target_radius = 40.0;
    double percentile = 0.80;
    double rebinarize_threshold = 0.5;

    /// Throws ShapeError if any field is out of range.
    void validate() const;
};

/// Nearest-rank q-quantile of the Euclidean distances from each foreground
/// pixel to the foreground centroid: element ceil(q*N)-1 of the sorted list.
double radial_percentile(const BinaryShape& s, double q);

/// Cubic convolution kernel with a = -0.5 (Catmull-Rom).
double cubic_kernel(double t) noexcept;

/**
 * Canonicalize a mask.
 *
 * The rescaled sampling grid is anchored at the source centroid: rescaled
 * pixel u samples the source at centroid_x + u / scale. Because the centroid
 * is carried as exact integer sums, an integer translation of the input gives
 * a bit-identical result as long as no foreground reaches the image border.
 *
 * Throws ShapeError on an empty foreground, a zero percentile radius, or when
 * rescaling erases the foreground.
 */
BinaryShape align(const BinaryShape& s, const AlignmentParams& p = {});

}  // namespace shapebench

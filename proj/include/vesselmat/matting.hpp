#pragma once

#include <cstdint>
#include <vector>

#include "vesselmat/image.hpp"
#include "vesselmat/regions.hpp"
#include "vesselmat/trimap.hpp"

namespace vesselmat {

enum class DistanceMetric { Euclidean, Chebyshev };

const char* to_string(DistanceMetric metric);
DistanceMetric parse_distance_metric(const std::string& text);

struct PixelCoord {
    int x = 0;
    int y = 0;
    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Unknown pixels grouped by equal distance to the nearest Vessel pixel.
/// Distances are stored squared for the euclidean metric so grouping is exact.
struct HierarchySet {
    DistanceMetric metric = DistanceMetric::Euclidean;
    std::vector<std::vector<PixelCoord>> hierarchies;  // each in raster order
    std::vector<std::int64_t> distance_keys;           // strictly increasing

    double distance(std::size_t j) const;
    std::size_t pixel_count() const;
};

/// Exact distance transform to the nearest `feature` pixel: squared euclidean
/// distance or chebyshev distance. Images with no feature pixel give INT64_MAX.
Image<std::int64_t> distance_transform(const BinaryMask& feature, DistanceMetric metric);

/// Throws Error(Stratification) when the trimap has no Vessel pixel.
HierarchySet stratify(const TriMap& tm, DistanceMetric metric = DistanceMetric::Euclidean);

/// |i_u - i_k| + omega * (dist - x_min) / (x_max - x_min); the spatial term is
/// zero when x_max == x_min.
double correlation(double intensity_u, double intensity_k, double dist, double x_min, double x_max,
                   double omega = 0.5);

enum class UpdateSchedule {
    /// Pixels of one hierarchy only see labels committed by earlier hierarchies.
    Synchronous,
    /// Pixels see earlier pixels of their own hierarchy (raster order).
    GaussSeidel,
};

struct MattingOptions {
    int window = 9;
    double omega = 0.5;
    DistanceMetric metric = DistanceMetric::Euclidean;
    UpdateSchedule schedule = UpdateSchedule::Synchronous;
};

struct SegmentedImage {
    BinaryMask vessel;
    /// Unknown pixels that never saw a labelled pixel and defaulted to background.
    std::size_t unresolved = 0;
};

/// Resolves every Unknown pixel hierarchy by hierarchy: it takes the label of the
/// labelled pixel in its window with the smallest correlation (ties: smaller
/// distance, then vessel, then raster order). Pixels with no labelled pixel in
/// the window are retried after each hierarchy commits, and fall back to
/// background if still unresolved at the end. A trimap without Unknown pixels
/// needs no Vessel pixel.
SegmentedImage hierarchical_update(const TriMap& tm, const GrayImage& i_mr, const MattingOptions& opts = {});

/// Removes components with area < a2 and extent > e2 and vratio < r.
SegmentedImage postprocess(const SegmentedImage& iv, const FeatureThresholds& th);

namespace reference {
SegmentedImage hierarchical_update(const TriMap& tm, const GrayImage& i_mr, const MattingOptions& opts = {});
}

}  // namespace vesselmat

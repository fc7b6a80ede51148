#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vesselmat/image.hpp"

namespace vesselmat {

/// 0 = background; components are numbered 1..count in raster first-touch order.
struct LabelMap {
    Image<std::int32_t> labels;
    int count = 0;

    int width() const { return labels.width(); }
    int height() const { return labels.height(); }
};

struct BoundingBox {
    int min_x = 0;
    int min_y = 0;
    int width = 0;
    int height = 0;
};

struct RegionFeatures {
    std::int64_t area = 0;
    BoundingBox bbox;
    double extent = 0.0;
    double vratio = 0.0;
    double solidity = 0.0;
    double hull_area = 0.0;
};

/// Region-feature thresholds. Area thresholds come from internal_factor().
/// e1 and e2 feed different predicates and are not ordered against each other.
struct FeatureThresholds {
    double e1 = 0.35;
    double e2 = 0.25;
    double r = 2.2;
    double s = 0.53;
    double a1 = 42.0;
    double a2 = 735.0;

    void validate() const;
};

struct InternalFactor {
    double fi = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

/// f_i = d * max(h,w) / min(h,w); a1 = 2 f_i; a2 = 35 f_i.
InternalFactor internal_factor(int height, int width, double d = 21.0);

/// 8-connected labeling.
LabelMap connected_components(const BinaryMask& mask);

/// Features of every component, indexed by label - 1.
std::vector<RegionFeatures> region_features(const LabelMap& lm);
/// Throws Error(Lookup) if `label` is not in 1..count.
RegionFeatures region_features(const LabelMap& lm, int label);

/// Area of the convex hull of a pixel set, each pixel taken as a unit square.
double pixel_hull_area(const std::vector<std::pair<int, int>>& pixels);

/// Keeps the components for which `keep` returns true.
BinaryMask filter_components(const BinaryMask& mask,
                             const std::function<bool(const RegionFeatures&)>& keep);

/// Largest 8-connected component (lowest label on ties); empty mask if none.
BinaryMask largest_component(const BinaryMask& mask);

struct OtsuResult {
    double threshold = 0.0;
    int bin = 0;
    bool degenerate = false;
};

/// Maximizes between-class variance over a `bins`-bin histogram of [0,1]. Ties go
/// to the lowest bin; the threshold is that bin's upper edge. Only pixels with
/// roi true are counted when a roi is given.
OtsuResult otsu(const GrayImage& img, int bins = 256, const BinaryMask* roi = nullptr);

/// Same search on a prebuilt histogram; exposed for testing.
int otsu_bin(const std::vector<std::uint64_t>& histogram);

}  // namespace vesselmat

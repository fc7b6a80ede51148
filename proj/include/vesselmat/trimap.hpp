#pragma once

#include <cstdint>

#include "vesselmat/image.hpp"
#include "vesselmat/regions.hpp"

namespace vesselmat {

enum class TriLabel : std::uint8_t { Background = 0, Unknown = 1, Vessel = 2 };

using TriMap = Image<TriLabel>;

struct ThreeWaySplit {
    BinaryMask background;
    BinaryMask unknown;
    BinaryMask vessel;  // V1
};

/// B: value < p1, U: p1 <= value < p2, V1: p2 <= value. Throws Error(Config)
/// unless 0 < p1 < p2.
ThreeWaySplit segment_three_way(const GrayImage& i_mr, double p1 = 0.2, double p2 = 0.35);

/// Keeps components with area > a1, then drops those with extent <= e1 and
/// vratio <= r and solidity >= s.
BinaryMask denoise_preliminary(const BinaryMask& v1, const FeatureThresholds& th);

struct SkeletonThreshold {
    BinaryMask mask;
    double threshold = 0.0;
    bool degenerate = false;
};

/// i_iuw > otsu(i_iuw) - epsilon. A constant image gives an empty mask.
SkeletonThreshold skeleton_threshold(const GrayImage& i_iuw, double epsilon = 0.03,
                                     const BinaryMask* roi = nullptr);

struct AreaPartition {
    BinaryMask small;   // T1: area < a1
    BinaryMask medium;  // T2: a1 <= area <= a2
    BinaryMask large;   // T3: a2 < area
};

AreaPartition partition_by_area(const BinaryMask& t, double a1, double a2);

/// T2 components with extent > e2 and vratio <= r.
BinaryMask select_t4(const BinaryMask& t2, const FeatureThresholds& th);

/// Thins to a one-pixel-wide, 8-connected centerline. Zhang-Suen style
/// two-subiteration passes, where each marked pixel is deleted only if it is
/// still a simple, non-end point when its turn comes in raster order; a final
/// pass removes the remaining simple pixels that have at least two neighbours.
/// Preserves the number of 8-connected components.
BinaryMask extract_skeleton(const BinaryMask& mask);

/// True if removing the pixel leaves the 8-connectivity of its neighbourhood
/// and the 4-connected background unchanged.
bool is_simple_point(const BinaryMask& mask, int x, int y);

struct TrimapOptions {
    double p1 = 0.2;
    double p2 = 0.35;
    double epsilon = 0.03;
    bool use_skeleton = true;
};

struct TrimapStages {
    ThreeWaySplit split;
    BinaryMask v2;
    SkeletonThreshold t;
    AreaPartition parts;
    BinaryMask t4;
    BinaryMask skeleton;
    TriMap trimap;
};

/// Vessel = V2 union S, Unknown = U minus Vessel, everything else Background;
/// pixels outside `fov` are Background.
TrimapStages build_trimap_stages(const GrayImage& i_mr, const GrayImage& i_iuw, const BinaryMask& fov,
                                 const FeatureThresholds& th, const TrimapOptions& opts = {});
TriMap build_trimap(const GrayImage& i_mr, const GrayImage& i_iuw, const BinaryMask& fov,
                    const FeatureThresholds& th, const TrimapOptions& opts = {});

BinaryMask trimap_mask(const TriMap& tm, TriLabel label);

/// Background 0, Unknown 128, Vessel 255.
Image<std::uint8_t> encode_trimap(const TriMap& tm);
TriMap decode_trimap(const Image<std::uint8_t>& encoded);
/// Vessel white, Background black, Unknown red.
RgbImage trimap_overlay(const TriMap& tm);

}  // namespace vesselmat

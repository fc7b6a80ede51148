#pragma once

#include <optional>
#include <vector>

#include "vesselmat/image.hpp"

namespace vesselmat {

struct Offset {
    int dx = 0;
    int dy = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

/// Flat line structuring element, centered on the origin, y axis pointing down.
struct StructuringElement {
    std::vector<Offset> offsets;
    double angle_deg = 0.0;
    int length = 1;

    /// Largest |dx| or |dy|.
    int radius() const;
};

/// Discrete 8-connected line of exactly `length` pixels (odd lengths give a
/// point-symmetric line). The dominant axis is stepped one pixel at a time and
/// the minor coordinate is rounded (half away from zero) from the integer
/// endpoint (half, round(half * tan)).
StructuringElement linear_se(int length, double angle_deg);

/// Angles k*15 degrees for 0 < angle < 180, optionally with 0 added first.
std::vector<double> default_angles(bool include_horizontal = false);

// Out-of-bounds samples are excluded from the min/max (erosion pads with +inf,
// dilation with -inf). With this border rule erode/dilate form an adjunction, so
// opening is exactly anti-extensive and idempotent.
GrayImage erode(const GrayImage& img, const StructuringElement& se);
GrayImage dilate(const GrayImage& img, const StructuringElement& se);
GrayImage opening(const GrayImage& img, const StructuringElement& se);

/// (1 - i_g) minus its opening by `se`.
GrayImage tophat_directional(const GrayImage& i_g, const StructuringElement& se);
GrayImage tophat_directional(const GrayImage& i_g, double angle_deg, int se_length = 21);

/// Sum of directional top-hats in the given angle order, min-max normalized to
/// [0,1]. With a roi, min and max are taken over roi pixels and the result is
/// clamped. Throws Error(Config) on an empty angle set.
GrayImage morph_reconstructed(const GrayImage& i_g, const std::vector<double>& angles_deg,
                              int se_length = 21, const BinaryMask* roi = nullptr);

/// Min-max normalization to [0,1]; a flat input maps to all zeros.
GrayImage normalize_minmax(const GrayImage& img, const BinaryMask* roi = nullptr);

/// Single-threaded, straightforward versions kept as the reference for the
/// OpenMP kernels above.
namespace reference {
GrayImage erode(const GrayImage& img, const StructuringElement& se);
GrayImage dilate(const GrayImage& img, const StructuringElement& se);
GrayImage opening(const GrayImage& img, const StructuringElement& se);
GrayImage morph_reconstructed(const GrayImage& i_g, const std::vector<double>& angles_deg,
                              int se_length = 21, const BinaryMask* roi = nullptr);
}  // namespace reference

}  // namespace vesselmat

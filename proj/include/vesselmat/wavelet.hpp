#pragma once

#include <vector>

#include "vesselmat/image.hpp"

namespace vesselmat {

enum class BoundaryMode { Replicate, Periodic };

/// Scaling images c_1..c_n and detail images w_1..w_n (w_j = c_{j-1} - c_j).
struct IuwtDecomposition {
    std::vector<GrayImage> scaling;
    std::vector<GrayImage> detail;

    int levels() const { return static_cast<int>(scaling.size()); }
};

/// Cubic B-spline taps [1,4,6,4,1]/16 with 2^level - 1 zeros between neighbours.
std::vector<double> atrous_kernel(int level);

/// Separable a trous decomposition (rows, then columns, same 1-D kernel).
/// Throws Error(Level) if levels < 1 or the coarsest kernel exceeds 4x the
/// smaller image dimension.
IuwtDecomposition iuwt_decompose(const GrayImage& img, int levels,
                                 BoundaryMode mode = BoundaryMode::Replicate);

/// c_n + sum of all w_j.
GrayImage iuwt_reconstruct(const IuwtDecomposition& dec);

struct IuwtEnhanceOptions {
    std::vector<int> scales{2, 3};
    int levels = 3;
    /// Also add the residual c_n (literal reading of the enhancement sum).
    bool include_residual = false;
    /// Decompose 1 - i_g so dark vessels give positive detail coefficients.
    bool complement = true;
    /// Skip min-max normalization (used to check exact reconstruction).
    bool normalize = true;
};

/// Sum of the selected detail scales, min-max normalized to [0,1] (over roi
/// pixels when given, then clamped). Throws Error(Config) on an empty or
/// out-of-range scale set.
GrayImage iuwt_enhance(const GrayImage& i_g, const IuwtEnhanceOptions& opts = {},
                       const BinaryMask* roi = nullptr);

namespace reference {
IuwtDecomposition iuwt_decompose(const GrayImage& img, int levels,
                                 BoundaryMode mode = BoundaryMode::Replicate);
}

}  // namespace vesselmat

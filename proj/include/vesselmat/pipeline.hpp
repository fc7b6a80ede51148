#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vesselmat/config.hpp"
#include "vesselmat/image.hpp"
#include "vesselmat/matting.hpp"
#include "vesselmat/trimap.hpp"

namespace vesselmat {

struct PipelineResult {
    GrayImage green;
    BinaryMask fov;
    GrayImage i_mr;
    GrayImage i_iuw;
    TrimapStages stages;
    SegmentedImage segmented;
    /// Final binary vessel mask.
    BinaryMask mask;
    /// Enhancement through postprocessing; decoding is not included.
    double seconds = 0.0;
    std::vector<std::string> warnings;

    const TriMap& trimap() const { return stages.trimap; }
};

/// Runs green channel, FOV, both enhancement filters, trimap, matting and
/// postprocessing on one decoded image.
PipelineResult run_pipeline(const RgbImage& img, const std::optional<BinaryMask>& dataset_fov,
                            const PipelineConfig& cfg);

}  // namespace vesselmat

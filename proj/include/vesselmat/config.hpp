#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vesselmat/matting.hpp"
#include "vesselmat/regions.hpp"

namespace vesselmat {

enum class FovMode {
    /// Dataset mask when available, luminance estimate otherwise.
    Auto,
    /// Always estimate from luminance.
    Estimate,
    /// Whole frame.
    Full,
};

const char* to_string(FovMode mode);
FovMode parse_fov_mode(const std::string& text);

/// Every tunable of the pipeline. Area thresholds are derived per image from
/// internal_factor(), so only d is stored here.
struct PipelineConfig {
    // region features
    double e1 = 0.35;
    double e2 = 0.25;
    double r = 2.2;
    double s = 0.53;
    double d = 21.0;

    // morphological filter
    std::vector<double> angles = {15, 30, 45, 60, 75, 90, 105, 120, 135, 150, 165};
    int se_length = 21;

    // trimap
    double p1 = 0.2;
    double p2 = 0.35;
    double epsilon = 0.03;

    // wavelet
    std::vector<int> iuwt_scales = {2, 3};
    int iuwt_levels = 3;
    bool iuwt_residual = false;

    // matting
    double omega = 0.5;
    int window = 9;
    DistanceMetric metric = DistanceMetric::Euclidean;
    UpdateSchedule schedule = UpdateSchedule::Synchronous;

    // field of view
    FovMode fov_mode = FovMode::Auto;
    double fov_fraction = 0.08;
    int fov_extend_rounds = 5;

    // evaluation
    bool full_frame = false;

    // ablations
    bool postprocess = true;
    bool skeleton = true;
    bool trimap_only = false;

    /// Throws Error(Config) on out-of-range values.
    void validate() const;

    FeatureThresholds thresholds(int height, int width) const;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// `key = value` lines; '#' starts a comment. Unknown keys are rejected.
PipelineConfig parse_config(const std::string& text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

/// Sets one key; throws Error(Config) on an unknown key or malformed value.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Dumps every key; parse_config(dump_config(c)) == c.
std::string dump_config(const PipelineConfig& cfg);

}  // namespace vesselmat

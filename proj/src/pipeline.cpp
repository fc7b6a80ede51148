#include "vesselmat/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "vesselmat/imgio.hpp"
#include "vesselmat/morphology.hpp"
#include "vesselmat/wavelet.hpp"

namespace vesselmat {

namespace {

bool all_black(const RgbImage& img)
{
    return std::all_of(img.data().begin(), img.data().end(), [](const Rgb& p) { return p == Rgb{}; });
}

}  // namespace

PipelineResult run_pipeline(const RgbImage& img, const std::optional<BinaryMask>& dataset_fov, const PipelineConfig& cfg)
{
    cfg.validate();
    if (img.empty())
        throw Error(ErrorKind::Shape, "pipeline: empty image");
    const auto start = std::chrono::steady_clock::now();
    PipelineResult res;
    res.green = green_channel(img);
    const int w = img.width();
    const int h = img.height();

    if (all_black(img)) {
        res.warnings.push_back("degenerate input: image is entirely black, nothing to segment");
        res.fov = BinaryMask(w, h, cfg.fov_mode == FovMode::Full ? 1 : 0);
        res.i_mr = GrayImage(w, h, 0.0);
        res.i_iuw = GrayImage(w, h, 0.0);
        res.stages.trimap = TriMap(w, h, TriLabel::Background);
        res.segmented.vessel = BinaryMask(w, h, 0);
        res.mask = BinaryMask(w, h, 0);
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return res;
    }

    FovOptions fov_opts;
    fov_opts.luminance_fraction = cfg.fov_fraction;
    switch (cfg.fov_mode) {
    case FovMode::Full: res.fov = BinaryMask(w, h, 1); break;
    case FovMode::Auto: res.fov = fov_mask(img, dataset_fov, fov_opts); break;
    case FovMode::Estimate: res.fov = fov_mask(img, std::nullopt, fov_opts); break;
    }

    const GrayImage work = extend_outside_fov(res.green, res.fov, cfg.fov_extend_rounds);
    res.i_mr = morph_reconstructed(work, cfg.angles, cfg.se_length, &res.fov);
    IuwtEnhanceOptions iuwt;
    iuwt.scales = cfg.iuwt_scales;
    iuwt.levels = cfg.iuwt_levels;
    iuwt.include_residual = cfg.iuwt_residual;
    res.i_iuw = iuwt_enhance(work, iuwt, &res.fov);

    const FeatureThresholds th = cfg.thresholds(h, w);
    TrimapOptions topts;
    topts.p1 = cfg.p1;
    topts.p2 = cfg.p2;
    topts.epsilon = cfg.epsilon;
    topts.use_skeleton = cfg.skeleton;
    res.stages = build_trimap_stages(res.i_mr, res.i_iuw, res.fov, th, topts);
    if (res.stages.t.degenerate)
        res.warnings.push_back("vessel-enhanced image is flat; skeleton threshold produced no pixels");

    const TriMap& tm = res.stages.trimap;
    const bool any_vessel = std::any_of(tm.data().begin(), tm.data().end(), [](TriLabel l) { return l == TriLabel::Vessel; });
    if (cfg.trimap_only) {
        res.segmented.vessel = trimap_mask(tm, TriLabel::Vessel);
    } else if (!any_vessel) {
        res.warnings.push_back("trimap has no vessel pixels; unknown region left as background");
        res.segmented.vessel = BinaryMask(w, h, 0);
    } else {
        MattingOptions mopts;
        mopts.window = cfg.window;
        mopts.omega = cfg.omega;
        mopts.metric = cfg.metric;
        mopts.schedule = cfg.schedule;
        res.segmented = hierarchical_update(tm, res.i_mr, mopts);
    }

    const SegmentedImage final = cfg.postprocess ? postprocess(res.segmented, th) : res.segmented;
    res.mask = final.vessel;
    for (std::size_t i = 0; i < res.mask.size(); ++i)
        res.mask[i] = (res.mask[i] && res.fov[i]) ? 1 : 0;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace vesselmat

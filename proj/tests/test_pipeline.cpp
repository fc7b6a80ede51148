#include <doctest.h>

#include "support/phantom.hpp"
#include "vesselmat/eval.hpp"
#include "vesselmat/pipeline.hpp"

using namespace vesselmat;

TEST_CASE("config defaults, parsing and round trip")
{
    PipelineConfig def;
    CHECK_NOTHROW(def.validate());
    CHECK(def.angles.size() == 11);
    CHECK(def.window == 9);
    CHECK(parse_config(dump_config(def)) == def);

    const auto c = parse_config("# tuned\nomega = 0.8\nangles = 0, 45,90\nmetric = chebyshev\nschedule = gauss-seidel\n");
    CHECK(c.omega == 0.8);
    CHECK(c.angles == std::vector<double>{0, 45, 90});
    CHECK(c.metric == DistanceMetric::Chebyshev);
    CHECK(c.schedule == UpdateSchedule::GaussSeidel);
    CHECK(parse_config(dump_config(c)) == c);

    CHECK_THROWS_AS(parse_config("bogus = 1"), Error);
    CHECK_THROWS_AS(parse_config("omega"), Error);
    CHECK_THROWS_AS(parse_config("window = 8"), Error);
    CHECK_THROWS_AS(parse_config("p1 = 0.5"), Error);
    CHECK_THROWS_AS(parse_config("iuwt_scales = 4"), Error);
    CHECK_THROWS_AS(parse_config("omega = abc"), Error);
    CHECK_THROWS_AS(load_config("/nonexistent/cfg"), Error);
}

TEST_CASE("thresholds scale with image size")
{
    PipelineConfig cfg;
    const auto th = cfg.thresholds(584, 565);
    CHECK(th.a1 == doctest::Approx(2 * 21.0 * 584 / 565));
    CHECK(th.e1 == cfg.e1);
}

TEST_CASE("pipeline segments a phantom well and is deterministic")
{
    const auto f = phantom::make_fundus(200, 7);
    PipelineConfig cfg;
    const auto a = run_pipeline(f.image, std::nullopt, cfg);
    const auto m = metrics(confusion(a.mask, f.vessels, a.fov));
    CHECK(*m.acc > 0.9);
    CHECK(*m.se > 0.5);
    CHECK(*m.sp > 0.9);
    const auto b = run_pipeline(f.image, std::nullopt, cfg);
    CHECK(a.mask == b.mask);
    CHECK(a.i_mr == b.i_mr);
    for (std::size_t i = 0; i < a.mask.size(); ++i)
        if (!a.fov[i])
            CHECK(a.mask[i] == 0);

    PipelineConfig gs = cfg;
    gs.schedule = UpdateSchedule::GaussSeidel;
    CHECK(*metrics(confusion(run_pipeline(f.image, std::nullopt, gs).mask, f.vessels, a.fov)).acc > 0.9);
}

TEST_CASE("ablations run")
{
    const auto f = phantom::make_fundus(160, 8);
    PipelineConfig cfg;
    cfg.trimap_only = true;
    const auto t = run_pipeline(f.image, f.fov, cfg);
    for (std::size_t i = 0; i < t.mask.size(); ++i)
        if (t.mask[i])
            CHECK(t.trimap()[i] == TriLabel::Vessel);
    cfg = {};
    cfg.skeleton = false;
    cfg.postprocess = false;
    cfg.metric = DistanceMetric::Chebyshev;
    CHECK_NOTHROW(run_pipeline(f.image, f.fov, cfg));
    cfg = {};
    cfg.fov_mode = FovMode::Full;
    CHECK(count_true(run_pipeline(f.image, std::nullopt, cfg).fov) == f.fov.size());
}

TEST_CASE("degenerate inputs")
{
    const auto black = run_pipeline(RgbImage(64, 64, Rgb{}), std::nullopt, PipelineConfig{});
    CHECK(count_true(black.mask) == 0);
    CHECK_FALSE(black.warnings.empty());

    RgbImage flat(64, 64, Rgb{120, 90, 40});
    const auto r = run_pipeline(flat, std::nullopt, PipelineConfig{});
    CHECK(count_true(r.mask) == 0);
    CHECK_FALSE(r.warnings.empty());
    CHECK_THROWS_AS(run_pipeline(RgbImage(), std::nullopt, PipelineConfig{}), Error);
}

// Serial reference vs OpenMP kernels on a 565x584 synthetic fundus image.
#include <benchmark/benchmark.h>

#include "../tests/support/phantom.hpp"
#include "vesselmat/imgio.hpp"
#include "vesselmat/matting.hpp"
#include "vesselmat/morphology.hpp"
#include "vesselmat/pipeline.hpp"
#include "vesselmat/wavelet.hpp"

using namespace vesselmat;

namespace {

const GrayImage& green()
{
    static const GrayImage g = green_channel(phantom::make_fundus(584, 1).image);
    return g;
}

struct MattingInput {
    TriMap trimap;
    GrayImage i_mr;
};

const MattingInput& matting_input()
{
    static const MattingInput in = [] {
        const auto f = phantom::make_fundus(584, 1);
        const auto res = run_pipeline(f.image, f.fov, PipelineConfig{});
        return MattingInput{res.trimap(), res.i_mr};
    }();
    return in;
}

void BM_Opening_Parallel(benchmark::State& st)
{
    const auto se = linear_se(21, 15.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(opening(green(), se));
}

void BM_Opening_Reference(benchmark::State& st)
{
    const auto se = linear_se(21, 15.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::opening(green(), se));
}

void BM_MorphReconstructed_Parallel(benchmark::State& st)
{
    const auto angles = default_angles(false);
    for (auto _ : st)
        benchmark::DoNotOptimize(morph_reconstructed(green(), angles));
}

void BM_MorphReconstructed_Reference(benchmark::State& st)
{
    const auto angles = default_angles(false);
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::morph_reconstructed(green(), angles));
}

void BM_Iuwt_Parallel(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(iuwt_decompose(green(), 3));
}

void BM_Iuwt_Reference(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::iuwt_decompose(green(), 3));
}

void BM_Matting_Parallel(benchmark::State& st)
{
    const auto& in = matting_input();
    for (auto _ : st)
        benchmark::DoNotOptimize(hierarchical_update(in.trimap, in.i_mr));
}

void BM_Matting_Reference(benchmark::State& st)
{
    const auto& in = matting_input();
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::hierarchical_update(in.trimap, in.i_mr));
}

}  // namespace

BENCHMARK(BM_Opening_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Opening_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MorphReconstructed_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MorphReconstructed_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Iuwt_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Iuwt_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Matting_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Matting_Reference)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv)
{
    // Build the shared inputs before any timing starts.
    green();
    matting_input();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv))
        return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}

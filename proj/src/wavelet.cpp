#include "vesselmat/wavelet.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "vesselmat/morphology.hpp"

namespace vesselmat {

namespace {

constexpr std::array<double, 5> kB3 = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

int wrap(int i, int n, BoundaryMode mode)
{
    if (mode == BoundaryMode::Replicate)
        return std::clamp(i, 0, n - 1);
    const int m = i % n;
    return m < 0 ? m + n : m;
}

void check_levels(const GrayImage& img, int levels)
{
    if (img.empty())
        throw Error(ErrorKind::Level, "iuwt_decompose: empty image");
    if (levels < 1)
        throw Error(ErrorKind::Level, "iuwt_decompose: need at least one level");
    if (levels > 24)
        throw Error(ErrorKind::Level, "iuwt_decompose: too many levels");
    const long kernel = 4L * (1L << (levels - 1)) + 1;
    const long extent = std::min(img.width(), img.height());
    if (kernel > 4 * extent)
        throw Error(ErrorKind::Level, "iuwt_decompose: " + std::to_string(levels) +
                                          " levels need a kernel longer than 4x the image extent");
}

// One separable smoothing step with the level-j kernel (5 non-zero taps).
GrayImage smooth(const GrayImage& in, int level, BoundaryMode mode)
{
    const int w = in.width();
    const int h = in.height();
    const int step = 1 << level;
    GrayImage tmp(w, h);
    GrayImage out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const auto src = in.row(y);
        auto dst = tmp.row(y);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 5; ++k)
                acc += kB3[k] * src[wrap(x + (k - 2) * step, w, mode)];
            dst[x] = acc;
        }
    }
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        std::array<std::span<const double>, 5> rows;
        for (int k = 0; k < 5; ++k)
            rows[k] = std::as_const(tmp).row(wrap(y + (k - 2) * step, h, mode));
        auto dst = out.row(y);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 5; ++k)
                acc += kB3[k] * rows[k][x];
            dst[x] = acc;
        }
    }
    return out;
}

IuwtDecomposition decompose_with(const GrayImage& img, int levels, BoundaryMode mode,
                                 GrayImage (*smoother)(const GrayImage&, int, BoundaryMode))
{
    check_levels(img, levels);
    IuwtDecomposition dec;
    // prev points into dec.scaling, so it must not reallocate.
    dec.scaling.reserve(static_cast<std::size_t>(levels));
    dec.detail.reserve(static_cast<std::size_t>(levels));
    const GrayImage* prev = &img;
    for (int j = 0; j < levels; ++j) {
        dec.scaling.push_back(smoother(*prev, j, mode));
        const GrayImage& cur = dec.scaling.back();
        GrayImage w(img.width(), img.height());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = (*prev)[i] - cur[i];
        dec.detail.push_back(std::move(w));
        prev = &dec.scaling.back();
    }
    return dec;
}

}  // namespace

std::vector<double> atrous_kernel(int level)
{
    if (level < 0)
        throw Error(ErrorKind::Level, "atrous_kernel: negative level");
    const std::size_t step = std::size_t{1} << level;
    std::vector<double> k(4 * step + 1, 0.0);
    for (std::size_t i = 0; i < kB3.size(); ++i)
        k[i * step] = kB3[i];
    return k;
}

IuwtDecomposition iuwt_decompose(const GrayImage& img, int levels, BoundaryMode mode)
{
    return decompose_with(img, levels, mode, &smooth);
}

GrayImage iuwt_reconstruct(const IuwtDecomposition& dec)
{
    if (dec.scaling.empty())
        throw Error(ErrorKind::Level, "iuwt_reconstruct: empty decomposition");
    GrayImage out = dec.scaling.back();
    for (const auto& w : dec.detail)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += w[i];
    return out;
}

GrayImage iuwt_enhance(const GrayImage& i_g, const IuwtEnhanceOptions& opts, const BinaryMask* roi)
{
    if (opts.scales.empty())
        throw Error(ErrorKind::Config, "iuwt_enhance: empty scale set");
    for (int s : opts.scales)
        if (s < 1 || s > opts.levels)
            throw Error(ErrorKind::Config, "iuwt_enhance: scale " + std::to_string(s) + " outside 1.." +
                                               std::to_string(opts.levels));
    GrayImage input = i_g;
    if (opts.complement)
        for (auto& v : input.data())
            v = 1.0 - v;
    const IuwtDecomposition dec = iuwt_decompose(input, opts.levels);
    GrayImage sum(i_g.width(), i_g.height(), 0.0);
    if (opts.include_residual)
        sum = dec.scaling.back();
    std::vector<int> scales = opts.scales;
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    for (int s : scales) {
        const GrayImage& w = dec.detail[static_cast<std::size_t>(s - 1)];
        for (std::size_t i = 0; i < sum.size(); ++i)
            sum[i] += w[i];
    }
    return opts.normalize ? normalize_minmax(sum, roi) : sum;
}

namespace reference {

namespace {

// Full zero-inserted kernel, applied tap by tap.
GrayImage smooth_literal(const GrayImage& in, int level, BoundaryMode mode)
{
    const auto kernel = atrous_kernel(level);
    const int half = static_cast<int>(kernel.size() / 2);
    const int w = in.width();
    const int h = in.height();
    GrayImage tmp(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < static_cast<int>(kernel.size()); ++k)
                if (kernel[k] != 0.0)
                    acc += kernel[k] * in(wrap(x + k - half, w, mode), y);
            tmp(x, y) = acc;
        }
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < static_cast<int>(kernel.size()); ++k)
                if (kernel[k] != 0.0)
                    acc += kernel[k] * tmp(x, wrap(y + k - half, h, mode));
            out(x, y) = acc;
        }
    return out;
}

}  // namespace

IuwtDecomposition iuwt_decompose(const GrayImage& img, int levels, BoundaryMode mode)
{
    check_levels(img, levels);
    IuwtDecomposition dec;
    dec.scaling.reserve(static_cast<std::size_t>(levels));
    dec.detail.reserve(static_cast<std::size_t>(levels));
    const GrayImage* prev = &img;
    for (int j = 0; j < levels; ++j) {
        dec.scaling.push_back(smooth_literal(*prev, j, mode));
        GrayImage w(img.width(), img.height());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = (*prev)[i] - dec.scaling.back()[i];
        dec.detail.push_back(std::move(w));
        prev = &dec.scaling.back();
    }
    return dec;
}

}  // namespace reference

}  // namespace vesselmat

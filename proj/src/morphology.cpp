#include "vesselmat/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

namespace vesselmat {

namespace {

// round(num / den) with halves away from zero; den > 0.
int round_ratio(long num, long den)
{
    const long mag = (2 * std::labs(num) + den) / (2 * den);
    return static_cast<int>(num < 0 ? -mag : mag);
}

int round_half_away(double v)
{
    return static_cast<int>(v < 0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

int StructuringElement::radius() const
{
    int r = 0;
    for (const auto& o : offsets)
        r = std::max({r, std::abs(o.dx), std::abs(o.dy)});
    return r;
}

StructuringElement linear_se(int length, double angle_deg)
{
    if (length < 1)
        throw Error(ErrorKind::Config, "linear_se: length must be >= 1");
    StructuringElement se;
    se.angle_deg = angle_deg;
    se.length = length;

    const int lo = (length - 1) / 2;
    const int hi = length - 1 - lo;
    const int half = std::max(lo, hi);
    if (half == 0) {
        se.offsets.push_back({0, 0});
        return se;
    }
    const double rad = angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const bool x_major = std::abs(c) >= std::abs(s) - 1e-12;
    // Minor-axis displacement at the end of the line, as an exact integer.
    const int minor = round_half_away(half * (x_major ? s / c : c / s));
    for (int t = -lo; t <= hi; ++t) {
        const int m = round_ratio(static_cast<long>(t) * minor, half);
        if (x_major)
            se.offsets.push_back({t, -m});
        else
            se.offsets.push_back({m, -t});
    }
    return se;
}

std::vector<double> default_angles(bool include_horizontal)
{
    std::vector<double> angles;
    if (include_horizontal)
        angles.push_back(0.0);
    for (int k = 1; k < 12; ++k)
        angles.push_back(15.0 * k);
    return angles;
}

namespace {

// Row-sliced kernel: for each offset, fold the shifted row into the output.
template <bool IsMin>
GrayImage rank_filter(const GrayImage& img, const StructuringElement& se)
{
    const int w = img.width();
    const int h = img.height();
    GrayImage out(w, h, IsMin ? kInf : -kInf);
    const double* src = img.data().data();
    double* dst = out.data().data();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        double* orow = dst + static_cast<std::size_t>(y) * w;
        for (const auto& o : se.offsets) {
            // erosion samples x + b, dilation samples x - b
            const int dx = IsMin ? o.dx : -o.dx;
            const int dy = IsMin ? o.dy : -o.dy;
            const int sy = y + dy;
            if (sy < 0 || sy >= h)
                continue;
            const double* irow = src + static_cast<std::size_t>(sy) * w;
            const int x0 = std::max(0, -dx);
            const int x1 = std::min(w, w - dx);
            for (int x = x0; x < x1; ++x) {
                const double v = irow[x + dx];
                if constexpr (IsMin)
                    orow[x] = v < orow[x] ? v : orow[x];
                else
                    orow[x] = v > orow[x] ? v : orow[x];
            }
        }
    }
    return out;
}

}  // namespace

GrayImage erode(const GrayImage& img, const StructuringElement& se) { return rank_filter<true>(img, se); }
GrayImage dilate(const GrayImage& img, const StructuringElement& se) { return rank_filter<false>(img, se); }
GrayImage opening(const GrayImage& img, const StructuringElement& se) { return dilate(erode(img, se), se); }

GrayImage tophat_directional(const GrayImage& i_g, const StructuringElement& se)
{
    GrayImage comp(i_g.width(), i_g.height());
    for (std::size_t i = 0; i < comp.size(); ++i)
        comp[i] = 1.0 - i_g[i];
    GrayImage opened = opening(comp, se);
    for (std::size_t i = 0; i < comp.size(); ++i)
        opened[i] = std::max(0.0, comp[i] - opened[i]);
    return opened;
}

GrayImage tophat_directional(const GrayImage& i_g, double angle_deg, int se_length)
{
    return tophat_directional(i_g, linear_se(se_length, angle_deg));
}

GrayImage normalize_minmax(const GrayImage& img, const BinaryMask* roi)
{
    if (roi)
        require_same_shape(img, *roi, "normalize_minmax");
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (roi && !(*roi)[i])
            continue;
        lo = std::min(lo, img[i]);
        hi = std::max(hi, img[i]);
    }
    GrayImage out(img.width(), img.height(), 0.0);
    if (!(lo < hi))
        return out;
    const double scale = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < img.size(); ++i)
        out[i] = std::clamp((img[i] - lo) * scale, 0.0, 1.0);
    return out;
}

GrayImage morph_reconstructed(const GrayImage& i_g, const std::vector<double>& angles_deg, int se_length,
                              const BinaryMask* roi)
{
    if (angles_deg.empty())
        throw Error(ErrorKind::Config, "morph_reconstructed: empty angle set");
    GrayImage sum(i_g.width(), i_g.height(), 0.0);
    // Fixed angle order keeps the floating-point sum reproducible.
    for (double angle : angles_deg) {
        const GrayImage th = tophat_directional(i_g, angle, se_length);
        for (std::size_t i = 0; i < sum.size(); ++i)
            sum[i] += th[i];
    }
    return normalize_minmax(sum, roi);
}

namespace reference {

GrayImage erode(const GrayImage& img, const StructuringElement& se)
{
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double v = kInf;
            for (const auto& o : se.offsets)
                if (img.contains(x + o.dx, y + o.dy))
                    v = std::min(v, img(x + o.dx, y + o.dy));
            out(x, y) = v;
        }
    }
    return out;
}

GrayImage dilate(const GrayImage& img, const StructuringElement& se)
{
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double v = -kInf;
            for (const auto& o : se.offsets)
                if (img.contains(x - o.dx, y - o.dy))
                    v = std::max(v, img(x - o.dx, y - o.dy));
            out(x, y) = v;
        }
    }
    return out;
}

GrayImage opening(const GrayImage& img, const StructuringElement& se) { return reference::dilate(reference::erode(img, se), se); }

GrayImage morph_reconstructed(const GrayImage& i_g, const std::vector<double>& angles_deg, int se_length,
                              const BinaryMask* roi)
{
    if (angles_deg.empty())
        throw Error(ErrorKind::Config, "morph_reconstructed: empty angle set");
    GrayImage comp(i_g.width(), i_g.height());
    for (std::size_t i = 0; i < comp.size(); ++i)
        comp[i] = 1.0 - i_g[i];
    GrayImage sum(i_g.width(), i_g.height(), 0.0);
    for (double angle : angles_deg) {
        const GrayImage opened = reference::opening(comp, linear_se(se_length, angle));
        for (std::size_t i = 0; i < sum.size(); ++i)
            sum[i] += std::max(0.0, comp[i] - opened[i]);
    }
    return normalize_minmax(sum, roi);
}

}  // namespace reference

}  // namespace vesselmat

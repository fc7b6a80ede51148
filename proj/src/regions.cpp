#include "vesselmat/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vesselmat {

void FeatureThresholds::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(e1) || !positive(e2) || !positive(r) || !positive(s) || !positive(a1) || !positive(a2))
        throw Error(ErrorKind::Config, "feature thresholds must be positive");
    if (!(a1 < a2))
        throw Error(ErrorKind::Config, "feature thresholds require a1 < a2");
}

InternalFactor internal_factor(int height, int width, double d)
{
    if (height < 1 || width < 1)
        throw Error(ErrorKind::Config, "internal_factor: image dimensions must be positive");
    const double lo = std::min(height, width);
    const double hi = std::max(height, width);
    InternalFactor f;
    f.fi = d * hi / lo;
    f.a1 = 2.0 * f.fi;
    f.a2 = 35.0 * f.fi;
    return f;
}

LabelMap connected_components(const BinaryMask& mask)
{
    LabelMap lm;
    lm.labels = Image<std::int32_t>(mask.width(), mask.height(), 0);
    const int w = mask.width();
    const int h = mask.height();
    std::vector<std::pair<int, int>> stack;
    int next = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask(x, y) || lm.labels(x, y) != 0)
                continue;
            const int label = ++next;
            lm.labels(x, y) = label;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (!mask.contains(nx, ny) || !mask(nx, ny) || lm.labels(nx, ny) != 0)
                            continue;
                        lm.labels(nx, ny) = label;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
        }
    }
    lm.count = next;
    return lm;
}

namespace {

using Point = std::pair<std::int64_t, std::int64_t>;

std::int64_t cross(const Point& o, const Point& a, const Point& b)
{
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

// Twice the hull area of `pts` (monotone chain + shoelace).
std::int64_t twice_hull_area(std::vector<Point> pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        return 0;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0)
            --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    std::int64_t twice = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        twice += a.first * b.second - b.first * a.second;
    }
    return twice < 0 ? -twice : twice;
}

struct RowSpan {
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
};

}  // namespace

double pixel_hull_area(const std::vector<std::pair<int, int>>& pixels)
{
    std::vector<Point> corners;
    corners.reserve(pixels.size() * 4);
    for (auto [x, y] : pixels) {
        corners.emplace_back(x, y);
        corners.emplace_back(x + 1, y);
        corners.emplace_back(x, y + 1);
        corners.emplace_back(x + 1, y + 1);
    }
    return 0.5 * static_cast<double>(twice_hull_area(std::move(corners)));
}

std::vector<RegionFeatures> region_features(const LabelMap& lm)
{
    const int w = lm.width();
    const int h = lm.height();
    std::vector<RegionFeatures> feats(static_cast<std::size_t>(lm.count));
    std::vector<int> max_x(feats.size(), std::numeric_limits<int>::min());
    std::vector<int> max_y(feats.size(), std::numeric_limits<int>::min());
    for (auto& f : feats) {
        f.bbox.min_x = std::numeric_limits<int>::max();
        f.bbox.min_y = std::numeric_limits<int>::max();
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int label = lm.labels(x, y);
            if (label <= 0)
                continue;
            const auto i = static_cast<std::size_t>(label - 1);
            auto& f = feats[i];
            ++f.area;
            f.bbox.min_x = std::min(f.bbox.min_x, x);
            f.bbox.min_y = std::min(f.bbox.min_y, y);
            max_x[i] = std::max(max_x[i], x);
            max_y[i] = std::max(max_y[i], y);
        }
    }

    // Leftmost and rightmost pixel of every row is enough for the corner hull.
    std::vector<std::vector<RowSpan>> spans(feats.size());
    for (std::size_t i = 0; i < feats.size(); ++i) {
        feats[i].bbox.width = max_x[i] - feats[i].bbox.min_x + 1;
        feats[i].bbox.height = max_y[i] - feats[i].bbox.min_y + 1;
        spans[i].resize(static_cast<std::size_t>(feats[i].bbox.height));
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int label = lm.labels(x, y);
            if (label <= 0)
                continue;
            const auto i = static_cast<std::size_t>(label - 1);
            auto& span = spans[i][static_cast<std::size_t>(y - feats[i].bbox.min_y)];
            span.lo = std::min(span.lo, x);
            span.hi = std::max(span.hi, x);
        }
    }

    std::vector<Point> corners;
    for (std::size_t i = 0; i < feats.size(); ++i) {
        auto& f = feats[i];
        corners.clear();
        for (std::size_t row = 0; row < spans[i].size(); ++row) {
            const auto& span = spans[i][row];
            if (span.lo > span.hi)
                continue;
            const std::int64_t y = f.bbox.min_y + static_cast<std::int64_t>(row);
            corners.emplace_back(span.lo, y);
            corners.emplace_back(span.lo, y + 1);
            corners.emplace_back(span.hi + 1, y);
            corners.emplace_back(span.hi + 1, y + 1);
        }
        f.hull_area = 0.5 * static_cast<double>(twice_hull_area(corners));
        const double box = static_cast<double>(f.bbox.width) * static_cast<double>(f.bbox.height);
        f.extent = static_cast<double>(f.area) / box;
        f.vratio = static_cast<double>(std::max(f.bbox.width, f.bbox.height)) /
                   static_cast<double>(std::min(f.bbox.width, f.bbox.height));
        f.solidity = static_cast<double>(f.area) / f.hull_area;
    }
    return feats;
}

RegionFeatures region_features(const LabelMap& lm, int label)
{
    if (label < 1 || label > lm.count)
        throw Error(ErrorKind::Lookup, "region_features: no component with label " + std::to_string(label));
    return region_features(lm)[static_cast<std::size_t>(label - 1)];
}

BinaryMask filter_components(const BinaryMask& mask, const std::function<bool(const RegionFeatures&)>& keep)
{
    const LabelMap lm = connected_components(mask);
    const auto feats = region_features(lm);
    std::vector<std::uint8_t> kept(feats.size());
    for (std::size_t i = 0; i < feats.size(); ++i)
        kept[i] = keep(feats[i]) ? 1 : 0;
    BinaryMask out(mask.width(), mask.height(), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int label = lm.labels[i];
        if (label > 0 && kept[static_cast<std::size_t>(label - 1)])
            out[i] = 1;
    }
    return out;
}

BinaryMask largest_component(const BinaryMask& mask)
{
    const LabelMap lm = connected_components(mask);
    BinaryMask out(mask.width(), mask.height(), 0);
    if (lm.count == 0)
        return out;
    std::vector<std::size_t> area(static_cast<std::size_t>(lm.count) + 1, 0);
    for (auto label : lm.labels.data())
        ++area[static_cast<std::size_t>(label)];
    int best = 1;
    for (int label = 2; label <= lm.count; ++label)
        if (area[static_cast<std::size_t>(label)] > area[static_cast<std::size_t>(best)])
            best = label;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = lm.labels[i] == best ? 1 : 0;
    return out;
}

int otsu_bin(const std::vector<std::uint64_t>& histogram)
{
    const std::size_t bins = histogram.size();
    double total = 0.0;
    double total_sum = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
        total += static_cast<double>(histogram[k]);
        total_sum += static_cast<double>(k) * static_cast<double>(histogram[k]);
    }
    int best = -1;
    double best_var = -1.0;
    double w0 = 0.0;
    double sum0 = 0.0;
    for (std::size_t k = 0; k + 1 < bins; ++k) {
        w0 += static_cast<double>(histogram[k]);
        sum0 += static_cast<double>(k) * static_cast<double>(histogram[k]);
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0)
            continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (total_sum - sum0) / w1;
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        // Empty bins repeat a split; treat near-equal variances as ties.
        if (var > best_var * (1.0 + 1e-12) + 1e-300) {
            best_var = var;
            best = static_cast<int>(k);
        }
    }
    return best;
}

OtsuResult otsu(const GrayImage& img, int bins, const BinaryMask* roi)
{
    if (bins < 2)
        throw Error(ErrorKind::Config, "otsu: need at least two bins");
    if (roi)
        require_same_shape(img, *roi, "otsu");
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(bins), 0);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (roi && !(*roi)[i])
            continue;
        const double v = std::clamp(img[i], 0.0, 1.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        const auto b = std::min<std::size_t>(static_cast<std::size_t>(v * bins), static_cast<std::size_t>(bins - 1));
        ++hist[b];
    }
    OtsuResult res;
    if (!(lo < hi)) {
        res.degenerate = true;
        res.threshold = std::isfinite(lo) ? lo : 0.0;
        return res;
    }
    const int k = otsu_bin(hist);
    if (k < 0) {
        // All samples share one bin.
        res.degenerate = true;
        res.threshold = lo;
        return res;
    }
    res.bin = k;
    res.threshold = static_cast<double>(k + 1) / static_cast<double>(bins);
    return res;
}

}  // namespace vesselmat

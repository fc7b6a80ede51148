#include "vesselmat/matting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace vesselmat {

const char* to_string(DistanceMetric metric)
{
    return metric == DistanceMetric::Euclidean ? "euclidean" : "chebyshev";
}

DistanceMetric parse_distance_metric(const std::string& text)
{
    if (text == "euclidean")
        return DistanceMetric::Euclidean;
    if (text == "chebyshev")
        return DistanceMetric::Chebyshev;
    throw Error(ErrorKind::Config, "unknown distance metric '" + text + "'");
}

double HierarchySet::distance(std::size_t j) const
{
    const auto key = static_cast<double>(distance_keys.at(j));
    return metric == DistanceMetric::Euclidean ? std::sqrt(key) : key;
}

std::size_t HierarchySet::pixel_count() const
{
    std::size_t n = 0;
    for (const auto& h : hierarchies)
        n += h.size();
    return n;
}

namespace {

constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max();

// Meijster, Roerdink & Hesselink linear-time exact squared EDT.
Image<std::int64_t> squared_edt(const BinaryMask& feature)
{
    const int w = feature.width();
    const int h = feature.height();
    const std::int64_t inf = static_cast<std::int64_t>(w) + h + 1;
    Image<std::int64_t> g(w, h, inf);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < w; ++x) {
        g(x, 0) = feature(x, 0) ? 0 : inf;
        for (int y = 1; y < h; ++y)
            g(x, y) = feature(x, y) ? 0 : (g(x, y - 1) >= inf ? inf : g(x, y - 1) + 1);
        for (int y = h - 2; y >= 0; --y)
            if (g(x, y + 1) < g(x, y))
                g(x, y) = g(x, y + 1) + 1;
    }

    bool any = false;
    for (auto v : feature.data())
        any = any || v;
    Image<std::int64_t> dt(w, h, kFar);
    if (!any)
        return dt;

#pragma omp parallel
    {
        std::vector<int> s(static_cast<std::size_t>(w));
        std::vector<std::int64_t> t(static_cast<std::size_t>(w));
#pragma omp for schedule(static)
        for (int y = 0; y < h; ++y) {
            auto f = [&](std::int64_t x, std::int64_t i) {
                const std::int64_t gi = g(static_cast<int>(i), y);
                return (x - i) * (x - i) + gi * gi;
            };
            auto sep = [&](std::int64_t i, std::int64_t u) {
                const std::int64_t gi = g(static_cast<int>(i), y);
                const std::int64_t gu = g(static_cast<int>(u), y);
                return (u * u - i * i + gu * gu - gi * gi) / (2 * (u - i));
            };
            int q = 0;
            s[0] = 0;
            t[0] = 0;
            for (int u = 1; u < w; ++u) {
                while (q >= 0 && f(t[q], s[q]) > f(t[q], u))
                    --q;
                if (q < 0) {
                    q = 0;
                    s[0] = u;
                } else {
                    const std::int64_t wsep = 1 + sep(s[q], u);
                    if (wsep < w) {
                        ++q;
                        s[q] = u;
                        t[q] = wsep;
                    }
                }
            }
            for (int u = w - 1; u >= 0; --u) {
                dt(u, y) = f(u, s[q]);
                if (u == t[q])
                    --q;
            }
        }
    }
    return dt;
}

Image<std::int64_t> chebyshev_dt(const BinaryMask& feature)
{
    const int w = feature.width();
    const int h = feature.height();
    Image<std::int64_t> dt(w, h, kFar);
    bool any = false;
    for (std::size_t i = 0; i < feature.size(); ++i)
        if (feature[i]) {
            dt[i] = 0;
            any = true;
        }
    if (!any)
        return dt;
    auto relax = [&](int x, int y, int nx, int ny) {
        if (dt.contains(nx, ny) && dt(nx, ny) != kFar)
            dt(x, y) = std::min(dt(x, y), dt(nx, ny) + 1);
    };
    // Unit-weight 3x3 chamfer is exact for the chessboard metric.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            relax(x, y, x - 1, y);
            relax(x, y, x - 1, y - 1);
            relax(x, y, x, y - 1);
            relax(x, y, x + 1, y - 1);
        }
    for (int y = h - 1; y >= 0; --y)
        for (int x = w - 1; x >= 0; --x) {
            relax(x, y, x + 1, y);
            relax(x, y, x + 1, y + 1);
            relax(x, y, x, y + 1);
            relax(x, y, x - 1, y + 1);
        }
    return dt;
}

struct Choice {
    TriLabel label = TriLabel::Unknown;
    bool found = false;
};

// Best labelled pixel in the window around (x, y), reading `labels`.
Choice decide(const TriMap& labels, const GrayImage& i_mr, int x, int y, const MattingOptions& opts)
{
    const int r = opts.window / 2;
    struct Candidate {
        std::int64_t d2;
        double colour;
        TriLabel label;
    };
    thread_local std::vector<Candidate> cands;
    cands.clear();
    const double iu = i_mr(x, y);
    std::int64_t d2_min = std::numeric_limits<std::int64_t>::max();
    std::int64_t d2_max = 0;
    for (int dy = -r; dy <= r; ++dy) {
        const int ky = y + dy;
        if (ky < 0 || ky >= labels.height())
            continue;
        for (int dx = -r; dx <= r; ++dx) {
            const int kx = x + dx;
            if (kx < 0 || kx >= labels.width())
                continue;
            const TriLabel lab = labels(kx, ky);
            if (lab == TriLabel::Unknown)
                continue;
            const std::int64_t d2 = static_cast<std::int64_t>(dx) * dx + static_cast<std::int64_t>(dy) * dy;
            cands.push_back({d2, i_mr(kx, ky), lab});
            d2_min = std::min(d2_min, d2);
            d2_max = std::max(d2_max, d2);
        }
    }
    Choice best;
    if (cands.empty())
        return best;
    const double x_min = std::sqrt(static_cast<double>(d2_min));
    const double x_max = std::sqrt(static_cast<double>(d2_max));
    double best_beta = std::numeric_limits<double>::infinity();
    std::int64_t best_d2 = 0;
    for (const auto& c : cands) {
        const double beta =
            correlation(iu, c.colour, std::sqrt(static_cast<double>(c.d2)), x_min, x_max, opts.omega);
        bool better = false;
        if (!best.found || beta < best_beta)
            better = true;
        else if (beta == best_beta) {
            if (c.d2 < best_d2)
                better = true;
            else if (c.d2 == best_d2 && c.label == TriLabel::Vessel && best.label != TriLabel::Vessel)
                better = true;
        }
        if (better) {
            best.found = true;
            best.label = c.label;
            best_beta = beta;
            best_d2 = c.d2;
        }
    }
    return best;
}

void check_options(const MattingOptions& opts)
{
    if (opts.window < 3 || opts.window % 2 == 0)
        throw Error(ErrorKind::Config, "matting window must be odd and >= 3");
    if (!(opts.omega >= 0.0) || !std::isfinite(opts.omega))
        throw Error(ErrorKind::Config, "matting omega must be a non-negative number");
}

bool has_unknown(const TriMap& tm)
{
    return std::any_of(tm.data().begin(), tm.data().end(), [](TriLabel l) { return l == TriLabel::Unknown; });
}

SegmentedImage finish(const TriMap& labels, std::size_t unresolved)
{
    SegmentedImage out;
    out.vessel = trimap_mask(labels, TriLabel::Vessel);
    out.unresolved = unresolved;
    return out;
}

}  // namespace

Image<std::int64_t> distance_transform(const BinaryMask& feature, DistanceMetric metric)
{
    return metric == DistanceMetric::Euclidean ? squared_edt(feature) : chebyshev_dt(feature);
}

HierarchySet stratify(const TriMap& tm, DistanceMetric metric)
{
    const BinaryMask vessel = trimap_mask(tm, TriLabel::Vessel);
    if (count_true(vessel) == 0)
        throw Error(ErrorKind::Stratification, "stratify: trimap has no vessel pixels");
    const Image<std::int64_t> dt = distance_transform(vessel, metric);
    std::vector<std::pair<std::int64_t, std::size_t>> keyed;
    for (std::size_t i = 0; i < tm.size(); ++i)
        if (tm[i] == TriLabel::Unknown)
            keyed.emplace_back(dt[i], i);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    HierarchySet hs;
    hs.metric = metric;
    const int w = tm.width();
    for (const auto& [key, idx] : keyed) {
        if (hs.distance_keys.empty() || hs.distance_keys.back() != key) {
            hs.distance_keys.push_back(key);
            hs.hierarchies.emplace_back();
        }
        hs.hierarchies.back().push_back({static_cast<int>(idx % static_cast<std::size_t>(w)),
                                         static_cast<int>(idx / static_cast<std::size_t>(w))});
    }
    return hs;
}

double correlation(double intensity_u, double intensity_k, double dist, double x_min, double x_max, double omega)
{
    const double colour = std::abs(intensity_u - intensity_k);
    const double spatial = x_max > x_min ? (dist - x_min) / (x_max - x_min) : 0.0;
    return colour + omega * spatial;
}

SegmentedImage hierarchical_update(const TriMap& tm, const GrayImage& i_mr, const MattingOptions& opts)
{
    check_options(opts);
    require_same_shape(tm, i_mr, "hierarchical_update");
    if (!has_unknown(tm))
        return finish(tm, 0);
    const HierarchySet hs = stratify(tm, opts.metric);

    TriMap labels = tm;
    std::vector<PixelCoord> deferred;
    std::vector<Choice> choices;

    auto resolve_batch = [&](const std::vector<PixelCoord>& batch, std::vector<PixelCoord>& still_empty) {
        choices.assign(batch.size(), Choice{});
        if (opts.schedule == UpdateSchedule::Synchronous) {
            const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic, 256)
            for (std::ptrdiff_t i = 0; i < n; ++i)
                choices[static_cast<std::size_t>(i)] = decide(labels, i_mr, batch[i].x, batch[i].y, opts);
            for (std::size_t i = 0; i < batch.size(); ++i)
                if (choices[i].found)
                    labels(batch[i].x, batch[i].y) = choices[i].label;
        } else {
            for (std::size_t i = 0; i < batch.size(); ++i) {
                choices[i] = decide(labels, i_mr, batch[i].x, batch[i].y, opts);
                if (choices[i].found)
                    labels(batch[i].x, batch[i].y) = choices[i].label;
            }
        }
        for (std::size_t i = 0; i < batch.size(); ++i)
            if (!choices[i].found)
                still_empty.push_back(batch[i]);
    };

    std::vector<PixelCoord> pending;
    for (const auto& h : hs.hierarchies) {
        pending.clear();
        resolve_batch(h, pending);
        if (!deferred.empty()) {
            std::vector<PixelCoord> retry;
            resolve_batch(deferred, retry);
            deferred = std::move(retry);
        }
        deferred.insert(deferred.end(), pending.begin(), pending.end());
    }
    // Keep retrying while the deferred set still makes progress.
    while (!deferred.empty()) {
        std::vector<PixelCoord> retry;
        resolve_batch(deferred, retry);
        if (retry.size() == deferred.size())
            break;
        deferred = std::move(retry);
    }
    for (const auto& p : deferred)
        labels(p.x, p.y) = TriLabel::Background;
    return finish(labels, deferred.size());
}

SegmentedImage postprocess(const SegmentedImage& iv, const FeatureThresholds& th)
{
    th.validate();
    SegmentedImage out;
    out.unresolved = iv.unresolved;
    out.vessel = filter_components(iv.vessel, [&](const RegionFeatures& f) {
        const bool spurious = static_cast<double>(f.area) < th.a2 && f.extent > th.e2 && f.vratio < th.r;
        return !spurious;
    });
    return out;
}

namespace reference {

SegmentedImage hierarchical_update(const TriMap& tm, const GrayImage& i_mr, const MattingOptions& opts)
{
    check_options(opts);
    require_same_shape(tm, i_mr, "hierarchical_update");
    if (!has_unknown(tm))
        return finish(tm, 0);
    const HierarchySet hs = stratify(tm, opts.metric);
    TriMap labels = tm;
    std::vector<PixelCoord> deferred;

    auto run = [&](const std::vector<PixelCoord>& batch) {
        const TriMap snapshot = labels;
        const TriMap& view = opts.schedule == UpdateSchedule::Synchronous ? snapshot : labels;
        std::vector<PixelCoord> empty;
        for (const auto& p : batch) {
            const Choice c = decide(view, i_mr, p.x, p.y, opts);
            if (c.found)
                labels(p.x, p.y) = c.label;
            else
                empty.push_back(p);
        }
        return empty;
    };

    for (const auto& h : hs.hierarchies) {
        auto pending = run(h);
        if (!deferred.empty())
            deferred = run(deferred);
        deferred.insert(deferred.end(), pending.begin(), pending.end());
    }
    while (!deferred.empty()) {
        auto retry = run(deferred);
        if (retry.size() == deferred.size())
            break;
        deferred = std::move(retry);
    }
    for (const auto& p : deferred)
        labels(p.x, p.y) = TriLabel::Background;
    return finish(labels, deferred.size());
}

}  // namespace reference

}  // namespace vesselmat

// Brute-force reference computations used only by the tests. None of these
// share code with the library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "vesselmat/image.hpp"
#include "vesselmat/matting.hpp"
#include "vesselmat/morphology.hpp"
#include "vesselmat/trimap.hpp"

namespace oracle {

using namespace vesselmat;

// Pixel set of an 8-connected line: for each step along the dominant axis pick
// the integer minor coordinate closest to the ideal segment between
// (-half,-minor) and (half,minor); exact halves go away from zero.
inline std::set<std::pair<int, int>> line_pixels(int half, int end_x, int end_y)
{
    std::set<std::pair<int, int>> pts;
    const bool x_major = std::abs(end_x) >= std::abs(end_y);
    for (int t = -half; t <= half; ++t) {
        const double ideal = x_major ? double(t) * end_y / end_x : double(t) * end_x / end_y;
        int best = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (int c = -half - 1; c <= half + 1; ++c) {
            const double err = std::abs(c - ideal);
            if (err < best_err - 1e-12 || (std::abs(err - best_err) <= 1e-12 && std::abs(c) > std::abs(best))) {
                best = c;
                best_err = err;
            }
        }
        if (x_major)
            pts.insert({t, best});
        else
            pts.insert({best, t});
    }
    return pts;
}

// Exhaustive min/max: every image pixel q is tested for membership of q - p in
// the element. Out-of-image positions contribute nothing.
inline GrayImage erode(const GrayImage& img, const StructuringElement& se)
{
    std::set<std::pair<int, int>> members;
    for (const auto& o : se.offsets)
        members.insert({o.dx, o.dy});
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double v = std::numeric_limits<double>::infinity();
            for (int qy = 0; qy < img.height(); ++qy)
                for (int qx = 0; qx < img.width(); ++qx)
                    if (members.count({qx - x, qy - y}))
                        v = std::min(v, img(qx, qy));
            out(x, y) = v;
        }
    return out;
}

inline GrayImage dilate(const GrayImage& img, const StructuringElement& se)
{
    std::set<std::pair<int, int>> members;
    for (const auto& o : se.offsets)
        members.insert({o.dx, o.dy});
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double v = -std::numeric_limits<double>::infinity();
            for (int qy = 0; qy < img.height(); ++qy)
                for (int qx = 0; qx < img.width(); ++qx)
                    if (members.count({x - qx, y - qy}))
                        v = std::max(v, img(qx, qy));
            out(x, y) = v;
        }
    return out;
}

inline GrayImage opening(const GrayImage& img, const StructuringElement& se) { return oracle::dilate(oracle::erode(img, se), se); }

inline GrayImage tophat_sum(const GrayImage& i_g, const std::vector<double>& angles, int len)
{
    GrayImage comp(i_g.width(), i_g.height());
    for (std::size_t i = 0; i < comp.size(); ++i)
        comp[i] = 1.0 - i_g[i];
    GrayImage sum(i_g.width(), i_g.height(), 0.0);
    for (double a : angles) {
        const GrayImage op = oracle::opening(comp, linear_se(len, a));
        for (std::size_t i = 0; i < sum.size(); ++i)
            sum[i] += comp[i] - op[i];
    }
    return sum;
}

// Direct 2-D convolution with the outer product of a 1-D kernel, replicate border.
inline GrayImage convolve2d(const GrayImage& img, const std::vector<double>& k1)
{
    const int half = static_cast<int>(k1.size() / 2);
    GrayImage out(img.width(), img.height(), 0.0);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int j = 0; j < static_cast<int>(k1.size()); ++j)
                for (int i = 0; i < static_cast<int>(k1.size()); ++i) {
                    const int sx = std::clamp(x + i - half, 0, img.width() - 1);
                    const int sy = std::clamp(y + j - half, 0, img.height() - 1);
                    acc += k1[i] * k1[j] * img(sx, sy);
                }
            out(x, y) = acc;
        }
    return out;
}

// Union-find component ids (8-connectivity), canonicalized to first-touch order.
inline Image<int> components(const BinaryMask& m)
{
    const int w = m.width();
    const int h = m.height();
    std::vector<int> parent(m.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a)
            a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!m(x, y))
                continue;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (m.contains(x + dx, y + dy) && m(x + dx, y + dy))
                        parent[find(static_cast<int>(m.index(x, y)))] = find(static_cast<int>(m.index(x + dx, y + dy)));
        }
    Image<int> out(w, h, 0);
    std::map<int, int> rename;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i])
            continue;
        const int root = find(static_cast<int>(i));
        auto it = rename.find(root);
        if (it == rename.end())
            it = rename.emplace(root, static_cast<int>(rename.size()) + 1).first;
        out[i] = it->second;
    }
    return out;
}

inline int component_count(const BinaryMask& m)
{
    const Image<int> c = components(m);
    int n = 0;
    for (int v : c.data())
        n = std::max(n, v);
    return n;
}

// Convex hull area of unit-square pixels by gift wrapping over all corners.
inline double hull_area(const std::vector<std::pair<int, int>>& pixels)
{
    std::set<std::pair<long, long>> uniq;
    for (auto [x, y] : pixels)
        for (int cy = 0; cy <= 1; ++cy)
            for (int cx = 0; cx <= 1; ++cx)
                uniq.insert({x + cx, y + cy});
    std::vector<std::pair<long, long>> pts(uniq.begin(), uniq.end());
    auto cross = [](auto o, auto a, auto b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    auto dist2 = [](auto a, auto b) {
        return (a.first - b.first) * (a.first - b.first) + (a.second - b.second) * (a.second - b.second);
    };
    std::vector<std::pair<long, long>> hull;
    auto start = *std::min_element(pts.begin(), pts.end());
    auto cur = start;
    do {
        hull.push_back(cur);
        auto cand = pts[0] == cur ? pts[1] : pts[0];
        for (const auto& p : pts) {
            if (p == cur)
                continue;
            const long c = cross(cur, cand, p);
            if (c < 0 || (c == 0 && dist2(cur, p) > dist2(cur, cand)))
                cand = p;
        }
        cur = cand;
    } while (cur != start && hull.size() <= pts.size());
    double twice = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        twice += static_cast<double>(a.first * b.second - b.first * a.second);
    }
    return std::abs(twice) / 2.0;
}

// Otsu by recomputing class statistics from the raw histogram for every split.
inline int otsu_bin(const std::vector<std::uint64_t>& hist)
{
    int best = -1;
    double best_var = -1.0;
    for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
        double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (std::size_t i = 0; i < hist.size(); ++i) {
            if (i <= k) {
                n0 += hist[i];
                s0 += double(i) * hist[i];
            } else {
                n1 += hist[i];
                s1 += double(i) * hist[i];
            }
        }
        if (n0 == 0 || n1 == 0)
            continue;
        const double n = n0 + n1;
        const double m0 = s0 / n0;
        const double m1 = s1 / n1;
        const double var = (n0 / n) * (n1 / n) * (m0 - m1) * (m0 - m1);
        if (best < 0 || var > best_var * (1.0 + 1e-9)) {
            best = static_cast<int>(k);
            best_var = var;
        }
    }
    return best;
}

// Plain Zhang-Suen with fully parallel deletion in each subiteration.
inline BinaryMask zhang_suen(const BinaryMask& in)
{
    BinaryMask m = in;
    auto at = [&](int x, int y) { return (m.contains(x, y) && m(x, y)) ? 1 : 0; };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            std::vector<std::size_t> del;
            for (int y = 0; y < m.height(); ++y)
                for (int x = 0; x < m.width(); ++x) {
                    if (!m(x, y))
                        continue;
                    const int p2 = at(x, y - 1), p3 = at(x + 1, y - 1), p4 = at(x + 1, y), p5 = at(x + 1, y + 1);
                    const int p6 = at(x, y + 1), p7 = at(x - 1, y + 1), p8 = at(x - 1, y), p9 = at(x - 1, y - 1);
                    const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
                    const int seq[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
                    int a = 0;
                    for (int i = 0; i < 8; ++i)
                        a += (seq[i] == 0 && seq[i + 1] == 1);
                    const bool c1 = pass == 0 ? (p2 * p4 * p6 == 0) : (p2 * p4 * p8 == 0);
                    const bool c2 = pass == 0 ? (p4 * p6 * p8 == 0) : (p2 * p6 * p8 == 0);
                    if (b >= 2 && b <= 6 && a == 1 && c1 && c2)
                        del.push_back(m.index(x, y));
                }
            for (auto i : del)
                m[i] = 0;
            changed = changed || !del.empty();
        }
    }
    return m;
}

// Minimum over all vessel pixels, squared euclidean or chebyshev.
inline std::int64_t nearest(const TriMap& tm, int x, int y, DistanceMetric metric)
{
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (int vy = 0; vy < tm.height(); ++vy)
        for (int vx = 0; vx < tm.width(); ++vx) {
            if (tm(vx, vy) != TriLabel::Vessel)
                continue;
            const std::int64_t dx = vx - x, dy = vy - y;
            const std::int64_t d = metric == DistanceMetric::Euclidean ? dx * dx + dy * dy
                                                                         : std::max(std::abs(dx), std::abs(dy));
            best = std::min(best, d);
        }
    return best;
}

// Hierarchical labeling written directly from the algorithm description:
// sort unknowns by nearest-vessel distance, group equal distances, and for each
// group compute correlations against labelled pixels of a frozen copy.
inline BinaryMask hierarchical(const TriMap& tm, const GrayImage& img, int window, double omega,
                               DistanceMetric metric = DistanceMetric::Euclidean)
{
    struct U {
        std::int64_t d;
        int x, y;
    };
    std::vector<U> us;
    for (int y = 0; y < tm.height(); ++y)
        for (int x = 0; x < tm.width(); ++x)
            if (tm(x, y) == TriLabel::Unknown)
                us.push_back({nearest(tm, x, y, metric), x, y});
    std::stable_sort(us.begin(), us.end(), [](const U& a, const U& b) { return a.d < b.d; });

    TriMap cur = tm;
    const int r = window / 2;
    // Returns -1 when the window holds no labelled pixel.
    auto label_for = [&](const TriMap& view, int x, int y) -> int {
        std::vector<std::tuple<double, double, int, int>> cand;  // dist, colour, label, order
        int order = 0;
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx, ++order) {
                const int kx = x + dx, ky = y + dy;
                if (!view.contains(kx, ky) || view(kx, ky) == TriLabel::Unknown)
                    continue;
                cand.emplace_back(std::hypot(double(dx), double(dy)), img(kx, ky),
                                  view(kx, ky) == TriLabel::Vessel ? 1 : 0, order);
            }
        if (cand.empty())
            return -1;
        double xmin = 1e300, xmax = -1e300;
        for (auto& c : cand) {
            xmin = std::min(xmin, std::get<0>(c));
            xmax = std::max(xmax, std::get<0>(c));
        }
        double best_b = 0;
        double best_d = 0;
        int best_l = -1;
        for (auto& [d, col, lab, ord] : cand) {
            const double bs = xmax == xmin ? 0.0 : (d - xmin) / (xmax - xmin);
            const double b = std::abs(img(x, y) - col) + omega * bs;
            const bool take = best_l < 0 || b < best_b || (b == best_b && d < best_d) ||
                              (b == best_b && d == best_d && lab == 1 && best_l == 0);
            if (take) {
                best_b = b;
                best_d = d;
                best_l = lab;
            }
        }
        return best_l;
    };

    std::vector<std::pair<int, int>> deferred;
    auto run = [&](const std::vector<std::pair<int, int>>& batch) {
        const TriMap frozen = cur;
        std::vector<std::pair<int, int>> left;
        for (auto [x, y] : batch) {
            const int l = label_for(frozen, x, y);
            if (l < 0)
                left.push_back({x, y});
            else
                cur(x, y) = l ? TriLabel::Vessel : TriLabel::Background;
        }
        return left;
    };
    std::size_t i = 0;
    while (i < us.size()) {
        std::vector<std::pair<int, int>> group;
        std::size_t j = i;
        while (j < us.size() && us[j].d == us[i].d) {
            group.push_back({us[j].x, us[j].y});
            ++j;
        }
        auto left = run(group);
        if (!deferred.empty())
            deferred = run(deferred);
        deferred.insert(deferred.end(), left.begin(), left.end());
        i = j;
    }
    while (!deferred.empty()) {
        auto left = run(deferred);
        if (left.size() == deferred.size())
            break;
        deferred = left;
    }
    BinaryMask out(tm.width(), tm.height(), 0);
    for (std::size_t k = 0; k < tm.size(); ++k)
        out[k] = cur[k] == TriLabel::Vessel ? 1 : 0;
    return out;
}

}  // namespace oracle

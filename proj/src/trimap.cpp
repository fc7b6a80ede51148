#include "vesselmat/trimap.hpp"

#include <array>
#include <cmath>

namespace vesselmat {

ThreeWaySplit segment_three_way(const GrayImage& i_mr, double p1, double p2)
{
    if (!(p1 > 0.0) || !(p1 < p2))
        throw Error(ErrorKind::Config, "segment_three_way: require 0 < p1 < p2");
    ThreeWaySplit out{BinaryMask(i_mr.width(), i_mr.height(), 0), BinaryMask(i_mr.width(), i_mr.height(), 0),
                      BinaryMask(i_mr.width(), i_mr.height(), 0)};
    for (std::size_t i = 0; i < i_mr.size(); ++i) {
        const double v = i_mr[i];
        // Exact zeros (and anything below p1) are background.
        if (v < p1)
            out.background[i] = 1;
        else if (v < p2)
            out.unknown[i] = 1;
        else
            out.vessel[i] = 1;
    }
    return out;
}

BinaryMask denoise_preliminary(const BinaryMask& v1, const FeatureThresholds& th)
{
    th.validate();
    return filter_components(v1, [&](const RegionFeatures& f) {
        if (!(static_cast<double>(f.area) > th.a1))
            return false;
        const bool blob = f.extent <= th.e1 && f.vratio <= th.r && f.solidity >= th.s;
        return !blob;
    });
}

SkeletonThreshold skeleton_threshold(const GrayImage& i_iuw, double epsilon, const BinaryMask* roi)
{
    SkeletonThreshold out;
    out.mask = BinaryMask(i_iuw.width(), i_iuw.height(), 0);
    const OtsuResult ot = otsu(i_iuw, 256, roi);
    out.threshold = ot.threshold - epsilon;
    if (ot.degenerate) {
        out.degenerate = true;
        return out;
    }
    for (std::size_t i = 0; i < i_iuw.size(); ++i)
        out.mask[i] = (i_iuw[i] > out.threshold && (!roi || (*roi)[i])) ? 1 : 0;
    return out;
}

AreaPartition partition_by_area(const BinaryMask& t, double a1, double a2)
{
    if (!(a1 < a2))
        throw Error(ErrorKind::Config, "partition_by_area: require a1 < a2");
    const LabelMap lm = connected_components(t);
    const auto feats = region_features(lm);
    AreaPartition p{BinaryMask(t.width(), t.height(), 0), BinaryMask(t.width(), t.height(), 0),
                    BinaryMask(t.width(), t.height(), 0)};
    for (std::size_t i = 0; i < t.size(); ++i) {
        const int label = lm.labels[i];
        if (label <= 0)
            continue;
        const double area = static_cast<double>(feats[static_cast<std::size_t>(label - 1)].area);
        if (area < a1)
            p.small[i] = 1;
        else if (area <= a2)
            p.medium[i] = 1;
        else
            p.large[i] = 1;
    }
    return p;
}

BinaryMask select_t4(const BinaryMask& t2, const FeatureThresholds& th)
{
    th.validate();
    return filter_components(t2, [&](const RegionFeatures& f) { return f.extent > th.e2 && f.vratio <= th.r; });
}

namespace {

// Neighbours P2..P9 clockwise from north.
constexpr std::array<int, 8> kDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, 0, 1, 1, 1, 0, -1};

std::array<int, 8> neighbours(const BinaryMask& m, int x, int y)
{
    std::array<int, 8> p{};
    for (int k = 0; k < 8; ++k) {
        const int nx = x + kDx[k];
        const int ny = y + kDy[k];
        p[k] = (m.contains(nx, ny) && m(nx, ny)) ? 1 : 0;
    }
    return p;
}

int count_on(const std::array<int, 8>& p)
{
    int n = 0;
    for (int v : p)
        n += v;
    return n;
}

// 0 -> 1 transitions around the ring.
int transitions(const std::array<int, 8>& p)
{
    int a = 0;
    for (int k = 0; k < 8; ++k)
        a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
    return a;
}

// Yokoi connectivity number for 8-connected foreground.
int connectivity_number(const std::array<int, 8>& p)
{
    // Ring from east, counter-clockwise: E, NE, N, NW, W, SW, S, SE.
    const std::array<int, 8> ring = {p[2], p[1], p[0], p[7], p[6], p[5], p[4], p[3]};
    int n = 0;
    for (int k = 0; k < 8; k += 2) {
        const int a = 1 - ring[k];
        const int b = 1 - ring[(k + 1) % 8];
        const int c = 1 - ring[(k + 2) % 8];
        n += a - a * b * c;
    }
    return n;
}

bool zhang_suen_candidate(const std::array<int, 8>& p, bool first)
{
    const int b = count_on(p);
    if (b < 2 || b > 6 || transitions(p) != 1)
        return false;
    // p[0]=P2 (N), p[2]=P4 (E), p[4]=P6 (S), p[6]=P8 (W)
    if (first)
        return p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0;
    return p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0;
}

bool deletable(const BinaryMask& m, int x, int y)
{
    const auto p = neighbours(m, x, y);
    return count_on(p) >= 2 && connectivity_number(p) == 1;
}

}  // namespace

bool is_simple_point(const BinaryMask& mask, int x, int y)
{
    if (!mask(x, y))
        return false;
    return connectivity_number(neighbours(mask, x, y)) == 1;
}

BinaryMask extract_skeleton(const BinaryMask& mask)
{
    BinaryMask m(mask.width(), mask.height(), 0);
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = mask[i] ? 1 : 0;
    const int w = m.width();
    const int h = m.height();
    std::vector<std::pair<int, int>> marked;

    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            marked.clear();
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    if (m(x, y) && zhang_suen_candidate(neighbours(m, x, y), pass == 0))
                        marked.emplace_back(x, y);
            // Re-check at deletion time so thick diagonals and 2x2 blocks survive.
            for (auto [x, y] : marked) {
                if (deletable(m, x, y)) {
                    m(x, y) = 0;
                    changed = true;
                }
            }
        }
    }

    // Remove corner pixels left on 4-connected staircases.
    changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (m(x, y) && deletable(m, x, y)) {
                    m(x, y) = 0;
                    changed = true;
                }
    }
    return m;
}

TrimapStages build_trimap_stages(const GrayImage& i_mr, const GrayImage& i_iuw, const BinaryMask& fov,
                                 const FeatureThresholds& th, const TrimapOptions& opts)
{
    require_same_shape(i_mr, i_iuw, "build_trimap");
    require_same_shape(i_mr, fov, "build_trimap");
    th.validate();
    TrimapStages st;
    st.split = segment_three_way(i_mr, opts.p1, opts.p2);
    for (std::size_t i = 0; i < fov.size(); ++i) {
        if (!fov[i]) {
            st.split.unknown[i] = 0;
            st.split.vessel[i] = 0;
            st.split.background[i] = 1;
        }
    }
    st.v2 = denoise_preliminary(st.split.vessel, th);

    st.skeleton = BinaryMask(fov.width(), fov.height(), 0);
    if (opts.use_skeleton) {
        st.t = skeleton_threshold(i_iuw, opts.epsilon, &fov);
        st.parts = partition_by_area(st.t.mask, th.a1, th.a2);
        st.t4 = select_t4(st.parts.medium, th);
        BinaryMask combined = st.parts.large;
        for (std::size_t i = 0; i < combined.size(); ++i)
            combined[i] = (combined[i] || st.t4[i]) ? 1 : 0;
        st.skeleton = extract_skeleton(combined);
    }

    st.trimap = TriMap(fov.width(), fov.height(), TriLabel::Background);
    for (std::size_t i = 0; i < fov.size(); ++i) {
        if (!fov[i])
            continue;
        if (st.v2[i] || st.skeleton[i])
            st.trimap[i] = TriLabel::Vessel;
        else if (st.split.unknown[i])
            st.trimap[i] = TriLabel::Unknown;
    }
    return st;
}

TriMap build_trimap(const GrayImage& i_mr, const GrayImage& i_iuw, const BinaryMask& fov,
                    const FeatureThresholds& th, const TrimapOptions& opts)
{
    return build_trimap_stages(i_mr, i_iuw, fov, th, opts).trimap;
}

BinaryMask trimap_mask(const TriMap& tm, TriLabel label)
{
    BinaryMask out(tm.width(), tm.height(), 0);
    for (std::size_t i = 0; i < tm.size(); ++i)
        out[i] = tm[i] == label ? 1 : 0;
    return out;
}

Image<std::uint8_t> encode_trimap(const TriMap& tm)
{
    Image<std::uint8_t> out(tm.width(), tm.height(), 0);
    for (std::size_t i = 0; i < tm.size(); ++i) {
        switch (tm[i]) {
        case TriLabel::Background: out[i] = 0; break;
        case TriLabel::Unknown: out[i] = 128; break;
        case TriLabel::Vessel: out[i] = 255; break;
        }
    }
    return out;
}

TriMap decode_trimap(const Image<std::uint8_t>& encoded)
{
    TriMap tm(encoded.width(), encoded.height(), TriLabel::Background);
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        const auto v = encoded[i];
        if (v >= 192)
            tm[i] = TriLabel::Vessel;
        else if (v >= 64)
            tm[i] = TriLabel::Unknown;
    }
    return tm;
}

RgbImage trimap_overlay(const TriMap& tm)
{
    RgbImage out(tm.width(), tm.height());
    for (std::size_t i = 0; i < tm.size(); ++i) {
        switch (tm[i]) {
        case TriLabel::Background: out[i] = {0, 0, 0}; break;
        case TriLabel::Unknown: out[i] = {255, 0, 0}; break;
        case TriLabel::Vessel: out[i] = {255, 255, 255}; break;
        }
    }
    return out;
}

}  // namespace vesselmat

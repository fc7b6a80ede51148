// Synthetic fundus images and random inputs for tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vesselmat/image.hpp"
#include "vesselmat/trimap.hpp"

namespace phantom {

using namespace vesselmat;

struct Fundus {
    RgbImage image;
    BinaryMask vessels;
    BinaryMask fov;
};

struct Segment {
    double x0, y0, x1, y1, width;
};

inline double segment_distance(double px, double py, const Segment& s)
{
    const double vx = s.x1 - s.x0, vy = s.y1 - s.y0;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((px - s.x0) * vx + (py - s.y0) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (s.x0 + t * vx), py - (s.y0 + t * vy));
}

// Bright disc on black, with a branching tree of dark vessels of widths 1.5-6 px,
// a smooth illumination gradient and mild noise. Fully determined by `seed`.
inline Fundus make_fundus(int size = 256, std::uint32_t seed = 1)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double cx = size / 2.0, cy = size / 2.0, radius = size * 0.46;

    std::vector<Segment> segs;
    // Main arcades leave the "disc" near the left and branch outwards.
    const double ox = cx - size * 0.18, oy = cy;
    struct Seed {
        double x, y, angle, width;
        int depth;
    };
    std::vector<Seed> stack;
    for (double a : {-0.9, -0.35, 0.35, 0.9})
        stack.push_back({ox, oy, a + (uni(rng) - 0.5) * 0.2, 5.5 + uni(rng) * 0.5, 0});
    while (!stack.empty()) {
        Seed s = stack.back();
        stack.pop_back();
        double x = s.x, y = s.y, a = s.angle;
        const int steps = 6 + static_cast<int>(uni(rng) * 4);
        for (int k = 0; k < steps; ++k) {
            const double step = size * 0.045;
            const double nx = x + step * std::cos(a), ny = y + step * std::sin(a);
            if (std::hypot(nx - cx, ny - cy) > radius * 0.97)
                break;
            segs.push_back({x, y, nx, ny, s.width});
            x = nx;
            y = ny;
            a += (uni(rng) - 0.5) * 0.35;
            if (s.depth < 2 && k == steps / 2)
                stack.push_back({x, y, a + (uni(rng) < 0.5 ? -0.7 : 0.7), std::max(1.5, s.width * 0.6), s.depth + 1});
        }
    }

    Fundus f{RgbImage(size, size), BinaryMask(size, size, 0), BinaryMask(size, size, 0)};
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double rr = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
            if (rr > radius) {
                f.image(x, y) = Rgb{3, 2, 1};
                continue;
            }
            f.fov(x, y) = 1;
            double g = 0.50 + 0.10 * (x - cx) / size - 0.08 * (rr / radius) * (rr / radius);
            double dark = 0.0;
            for (const auto& s : segs) {
                const double d = segment_distance(x + 0.5, y + 0.5, s);
                const double half = s.width / 2.0;
                if (d <= half)
                    f.vessels(x, y) = 1;
                const double sigma = std::max(0.6, half * 0.7);
                const double depth = 0.10 + 0.02 * s.width;
                dark = std::max(dark, depth * std::exp(-0.5 * (d / sigma) * (d / sigma)));
            }
            g -= dark;
            g += (uni(rng) - 0.5) * 0.02;
            g = std::clamp(g, 0.0, 1.0);
            const auto to8 = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
            f.image(x, y) = Rgb{to8(g * 1.6), to8(g), to8(g * 0.4)};
        }
    return f;
}

inline GrayImage random_gray(std::mt19937& rng, int w, int h, int levels = 0)
{
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    GrayImage img(w, h);
    for (auto& v : img.data())
        v = levels > 1 ? std::floor(uni(rng) * levels) / (levels - 1) : uni(rng);
    return img;
}

inline BinaryMask random_mask(std::mt19937& rng, int w, int h, double density)
{
    std::bernoulli_distribution b(density);
    BinaryMask m(w, h, 0);
    for (auto& v : m.data())
        v = b(rng) ? 1 : 0;
    return m;
}

// Random blobs: a union of filled discs and thick strokes.
inline BinaryMask random_shapes(std::mt19937& rng, int w, int h, int count)
{
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    BinaryMask m(w, h, 0);
    for (int k = 0; k < count; ++k) {
        Segment s{uni(rng) * w, uni(rng) * h, uni(rng) * w, uni(rng) * h, 1.0 + uni(rng) * 5.0};
        if (uni(rng) < 0.3) {
            s.x1 = s.x0;
            s.y1 = s.y0;
            s.width = 2.0 + uni(rng) * 8.0;
        }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (segment_distance(x + 0.5, y + 0.5, s) <= s.width / 2.0)
                    m(x, y) = 1;
    }
    return m;
}

// Random trimap with at least one vessel pixel.
inline TriMap random_trimap(std::mt19937& rng, int w, int h, double p_vessel = 0.1, double p_unknown = 0.5)
{
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    TriMap tm(w, h, TriLabel::Background);
    for (auto& v : tm.data()) {
        const double u = uni(rng);
        v = u < p_vessel ? TriLabel::Vessel : u < p_vessel + p_unknown ? TriLabel::Unknown : TriLabel::Background;
    }
    std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1);
    tm(px(rng), py(rng)) = TriLabel::Vessel;
    return tm;
}

}  // namespace phantom

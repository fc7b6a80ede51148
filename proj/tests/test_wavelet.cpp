#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "support/phantom.hpp"
#include "vesselmat/wavelet.hpp"

using namespace vesselmat;

TEST_CASE("atrous kernel taps and spacing")
{
    const auto k1 = atrous_kernel(0);
    REQUIRE(k1.size() == 5);
    CHECK(k1[2] == doctest::Approx(6.0 / 16));
    const auto k3 = atrous_kernel(2);
    REQUIRE(k3.size() == 17);
    CHECK(k3[0] == doctest::Approx(1.0 / 16));
    CHECK(k3[1] == 0.0);
    CHECK(k3[4] == doctest::Approx(4.0 / 16));
    double sum = 0;
    for (double v : k3)
        sum += v;
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("first scale equals direct 2-D convolution")
{
    std::mt19937 rng(2);
    const auto img = phantom::random_gray(rng, 13, 9);
    const auto dec = iuwt_decompose(img, 2);
    const auto c1 = oracle::convolve2d(img, atrous_kernel(0));
    const auto c2 = oracle::convolve2d(c1, atrous_kernel(1));
    for (std::size_t i = 0; i < img.size(); ++i) {
        CHECK(dec.scaling[0][i] == doctest::Approx(c1[i]).epsilon(1e-12));
        CHECK(dec.scaling[1][i] == doctest::Approx(c2[i]).epsilon(1e-12));
        CHECK(dec.detail[0][i] == doctest::Approx(img[i] - c1[i]).epsilon(1e-12));
    }
}

TEST_CASE("reconstruction is exact up to rounding, both boundary modes")
{
    std::mt19937 rng(9);
    for (auto mode : {BoundaryMode::Replicate, BoundaryMode::Periodic}) {
        const auto img = phantom::random_gray(rng, 32, 21);
        const auto rec = iuwt_reconstruct(iuwt_decompose(img, 4, mode));
        for (std::size_t i = 0; i < img.size(); ++i)
            CHECK(std::abs(rec[i] - img[i]) <= 1e-12);
    }
}

TEST_CASE("periodic decomposition preserves the mean")
{
    std::mt19937 rng(4);
    const auto img = phantom::random_gray(rng, 16, 16);
    const auto dec = iuwt_decompose(img, 2, BoundaryMode::Periodic);
    double a = 0, b = 0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        a += img[i];
        b += dec.scaling[1][i];
    }
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("fast path is bit-identical to the reference")
{
    std::mt19937 rng(6);
    const auto img = phantom::random_gray(rng, 47, 38);
    for (auto mode : {BoundaryMode::Replicate, BoundaryMode::Periodic}) {
        const auto a = iuwt_decompose(img, 3, mode);
        const auto b = reference::iuwt_decompose(img, 3, mode);
        for (int j = 0; j < 3; ++j) {
            CHECK(a.scaling[j] == b.scaling[j]);
            CHECK(a.detail[j] == b.detail[j]);
        }
    }
}

TEST_CASE("level limits")
{
    GrayImage img(8, 8, 0.5);
    CHECK_THROWS_AS(iuwt_decompose(img, 0), Error);
    CHECK_NOTHROW(iuwt_decompose(img, 3));
    CHECK_THROWS_AS(iuwt_decompose(img, 4), Error);  // 33 taps on an 8 px side
}

TEST_CASE("enhancement is normalized and highlights dark lines")
{
    GrayImage img(48, 48, 0.7);
    for (int y = 0; y < 48; ++y) {
        img(23, y) = 0.4;
        img(24, y) = 0.4;
    }
    const auto e = iuwt_enhance(img);
    double lo = 1, hi = 0;
    for (double v : e.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
    CHECK(e(23, 24) > e(10, 24));
    IuwtEnhanceOptions bad;
    bad.scales = {4};
    CHECK_THROWS_AS(iuwt_enhance(img, bad), Error);
    bad.scales = {};
    CHECK_THROWS_AS(iuwt_enhance(img, bad), Error);
}

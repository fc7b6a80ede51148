#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vesselmat/error.hpp"

namespace vesselmat {

/// Dense row-major 2-D raster.
template <class T>
class Image {
public:
    using value_type = T;

    Image() = default;
    Image(int width, int height, T fill = T{})
        : width_(width), height_(height)
    {
        if (width < 0 || height < 0)
            throw Error(ErrorKind::Shape, "negative image dimensions");
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    std::size_t index(int x, int y) const
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    T& operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::span<T> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
    std::span<const T> row(int y) const { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    template <class U>
    bool same_shape(const Image<U>& other) const
    {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Image& a, const Image& b)
    {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

using RgbImage = Image<Rgb>;
/// Intensities, normally in [0,1].
using GrayImage = Image<double>;
/// 0 = false, 1 = true.
using BinaryMask = Image<std::uint8_t>;

template <class A, class B>
void require_same_shape(const Image<A>& a, const Image<B>& b, const char* what)
{
    if (!a.same_shape(b))
        throw Error(ErrorKind::Shape, std::string(what) + ": image dimensions differ");
}

inline std::size_t count_true(const BinaryMask& m)
{
    std::size_t n = 0;
    for (auto v : m.data())
        n += v ? 1 : 0;
    return n;
}

}  // namespace vesselmat

// On-disk fixtures: scratch directories, a minimal GIF writer and gzip output.
#pragma once

#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vesselmat/image.hpp"

namespace fixtures {

namespace fs = std::filesystem;

class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("vesselmat_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    fs::path path_;
};

inline void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes)
{
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<std::uint8_t> read_bytes(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 8-bit GIF with a 256-entry palette. The LZW stream never grows past 9-bit
// codes: a clear code is sent before the dictionary would need to widen.
inline std::vector<std::uint8_t> encode_gif(const vesselmat::Image<std::uint8_t>& indices,
                                            const std::vector<vesselmat::Rgb>& palette, bool interlaced = false)
{
    std::vector<std::uint8_t> out = {'G', 'I', 'F', '8', '9', 'a'};
    auto u16 = [&](int v) {
        out.push_back(static_cast<std::uint8_t>(v & 0xff));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    };
    u16(indices.width());
    u16(indices.height());
    out.push_back(0xF7);  // global table, 256 entries
    out.push_back(0);
    out.push_back(0);
    for (int i = 0; i < 256; ++i) {
        const auto c = i < static_cast<int>(palette.size()) ? palette[i] : vesselmat::Rgb{};
        out.insert(out.end(), {c.r, c.g, c.b});
    }
    out.push_back(0x2C);
    u16(0);
    u16(0);
    u16(indices.width());
    u16(indices.height());
    out.push_back(interlaced ? 0x40 : 0x00);
    out.push_back(8);

    std::vector<int> order;
    if (interlaced) {
        const int starts[4] = {0, 4, 2, 1}, steps[4] = {8, 8, 4, 2};
        for (int pass = 0; pass < 4; ++pass)
            for (int y = starts[pass]; y < indices.height(); y += steps[pass])
                order.push_back(y);
    } else {
        for (int y = 0; y < indices.height(); ++y)
            order.push_back(y);
    }
    std::vector<int> codes{256};
    int since_clear = 0;
    for (int y : order)
        for (int x = 0; x < indices.width(); ++x) {
            if (since_clear == 254) {
                codes.push_back(256);
                since_clear = 0;
            }
            codes.push_back(indices(x, y));
            ++since_clear;
        }
    codes.push_back(257);
    std::vector<std::uint8_t> packed;
    std::uint32_t acc = 0;
    int bits = 0;
    for (int c : codes) {
        acc |= static_cast<std::uint32_t>(c) << bits;
        bits += 9;
        while (bits >= 8) {
            packed.push_back(static_cast<std::uint8_t>(acc & 0xff));
            acc >>= 8;
            bits -= 8;
        }
    }
    if (bits)
        packed.push_back(static_cast<std::uint8_t>(acc & 0xff));
    for (std::size_t i = 0; i < packed.size(); i += 255) {
        const std::size_t n = std::min<std::size_t>(255, packed.size() - i);
        out.push_back(static_cast<std::uint8_t>(n));
        out.insert(out.end(), packed.begin() + static_cast<long>(i), packed.begin() + static_cast<long>(i + n));
    }
    out.push_back(0);
    out.push_back(0x3B);
    return out;
}

inline void write_gz(const fs::path& p, const std::vector<std::uint8_t>& bytes)
{
    fs::create_directories(p.parent_path());
    gzFile f = gzopen(p.string().c_str(), "wb");
    if (!f)
        throw std::runtime_error("gzopen failed");
    gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
    gzclose(f);
}

}  // namespace fixtures

// Minimal GIF reader: first frame only, composited onto the logical screen.

#include "gif.hpp"

#include <array>
#include <cstring>

namespace vesselmat::detail {

namespace {

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8()
    {
        if (pos_ >= bytes_.size())
            throw Error(ErrorKind::Format, "gif: unexpected end of data");
        return bytes_[pos_++];
    }
    int u16()
    {
        const int lo = u8();
        return lo | (u8() << 8);
    }
    void skip(std::size_t n)
    {
        if (n > bytes_.size() - pos_)
            throw Error(ErrorKind::Format, "gif: unexpected end of data");
        pos_ += n;
    }
    void skip_sub_blocks()
    {
        for (std::uint8_t len = u8(); len != 0; len = u8())
            skip(len);
    }
    std::vector<std::uint8_t> read_sub_blocks()
    {
        std::vector<std::uint8_t> out;
        for (std::uint8_t len = u8(); len != 0; len = u8()) {
            if (len > bytes_.size() - pos_)
                throw Error(ErrorKind::Format, "gif: truncated image data");
            out.insert(out.end(), bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                       bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
            pos_ += len;
        }
        return out;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::vector<Rgb> read_palette(Reader& rd, int entries)
{
    std::vector<Rgb> pal(static_cast<std::size_t>(entries));
    for (auto& c : pal) {
        c.r = rd.u8();
        c.g = rd.u8();
        c.b = rd.u8();
    }
    return pal;
}

std::vector<std::uint8_t> lzw_decode(const std::vector<std::uint8_t>& data, int min_code_size, std::size_t expected)
{
    if (min_code_size < 2 || min_code_size > 11)
        throw Error(ErrorKind::Format, "gif: bad LZW code size");
    const int clear = 1 << min_code_size;
    const int eoi = clear + 1;
    std::array<std::uint16_t, 4096> prefix{};
    std::array<std::uint8_t, 4096> suffix{};
    std::array<std::uint8_t, 4096> first{};
    for (int i = 0; i < clear; ++i) {
        suffix[i] = static_cast<std::uint8_t>(i);
        first[i] = static_cast<std::uint8_t>(i);
    }
    std::vector<std::uint8_t> out;
    out.reserve(expected);
    std::vector<std::uint8_t> stack;

    int code_size = min_code_size + 1;
    int next = eoi + 1;
    int prev = -1;
    std::uint32_t bits = 0;
    int nbits = 0;
    std::size_t pos = 0;

    while (out.size() < expected) {
        while (nbits < code_size) {
            if (pos >= data.size())
                return out;
            bits |= static_cast<std::uint32_t>(data[pos++]) << nbits;
            nbits += 8;
        }
        const int code = static_cast<int>(bits & ((1u << code_size) - 1));
        bits >>= code_size;
        nbits -= code_size;

        if (code == clear) {
            code_size = min_code_size + 1;
            next = eoi + 1;
            prev = -1;
            continue;
        }
        if (code == eoi)
            break;
        if (prev < 0) {
            if (code >= clear)
                throw Error(ErrorKind::Format, "gif: corrupt LZW stream");
            out.push_back(static_cast<std::uint8_t>(code));
            prev = code;
            continue;
        }
        int cur = code;
        stack.clear();
        if (code >= next) {
            if (code != next)
                throw Error(ErrorKind::Format, "gif: corrupt LZW stream");
            stack.push_back(first[prev]);
            cur = prev;
        }
        while (cur >= clear) {
            stack.push_back(suffix[cur]);
            cur = prefix[cur];
        }
        stack.push_back(static_cast<std::uint8_t>(cur));
        const std::uint8_t head = static_cast<std::uint8_t>(cur);
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            out.push_back(*it);
        if (next < 4096) {
            prefix[next] = static_cast<std::uint16_t>(prev);
            suffix[next] = head;
            first[next] = first[prev];
            ++next;
            if (next == (1 << code_size) && code_size < 12)
                ++code_size;
        }
        prev = code;
    }
    return out;
}

}  // namespace

bool looks_like_gif(std::span<const std::uint8_t> bytes)
{
    return bytes.size() >= 6 && std::memcmp(bytes.data(), "GIF8", 4) == 0;
}

RgbImage decode_gif(std::span<const std::uint8_t> bytes)
{
    if (!looks_like_gif(bytes))
        throw Error(ErrorKind::Format, "gif: bad signature");
    Reader rd(bytes);
    rd.skip(6);
    const int width = rd.u16();
    const int height = rd.u16();
    const std::uint8_t flags = rd.u8();
    const std::uint8_t background = rd.u8();
    rd.u8();  // aspect ratio
    if (width <= 0 || height <= 0)
        throw Error(ErrorKind::Format, "gif: empty logical screen");
    std::vector<Rgb> global;
    if (flags & 0x80)
        global = read_palette(rd, 2 << (flags & 0x07));

    RgbImage img(width, height, global.size() > background ? global[background] : Rgb{});
    int transparent = -1;
    for (;;) {
        const std::uint8_t tag = rd.u8();
        if (tag == 0x3B)
            throw Error(ErrorKind::Format, "gif: no image frame");
        if (tag == 0x21) {
            const std::uint8_t label = rd.u8();
            if (label == 0xF9) {
                const std::uint8_t len = rd.u8();
                if (len >= 4) {
                    const std::uint8_t gflags = rd.u8();
                    rd.u16();
                    const std::uint8_t index = rd.u8();
                    rd.skip(len - 4u);
                    if (gflags & 0x01)
                        transparent = index;
                } else {
                    rd.skip(len);
                }
            }
            rd.skip_sub_blocks();
            continue;
        }
        if (tag != 0x2C)
            throw Error(ErrorKind::Format, "gif: unexpected block");

        const int left = rd.u16();
        const int top = rd.u16();
        const int fw = rd.u16();
        const int fh = rd.u16();
        const std::uint8_t fflags = rd.u8();
        std::vector<Rgb> local;
        if (fflags & 0x80)
            local = read_palette(rd, 2 << (fflags & 0x07));
        const auto& pal = local.empty() ? global : local;
        if (pal.empty())
            throw Error(ErrorKind::Format, "gif: no colour table");
        const int min_code = rd.u8();
        const auto data = rd.read_sub_blocks();
        const std::size_t count = static_cast<std::size_t>(fw) * static_cast<std::size_t>(fh);
        const auto indices = lzw_decode(data, min_code, count);

        const bool interlaced = (fflags & 0x40) != 0;
        std::vector<int> rows;
        if (interlaced) {
            for (int start : {0, 4, 2, 1}) {
                const int step = start == 0 ? 8 : (start == 4 ? 8 : (start == 2 ? 4 : 2));
                for (int y = start; y < fh; y += step)
                    rows.push_back(y);
            }
        } else {
            for (int y = 0; y < fh; ++y)
                rows.push_back(y);
        }
        for (std::size_t i = 0; i < indices.size(); ++i) {
            const int fy = rows[i / static_cast<std::size_t>(fw)];
            const int fx = static_cast<int>(i % static_cast<std::size_t>(fw));
            const int x = left + fx;
            const int y = top + fy;
            const int index = indices[i];
            if (index == transparent || !img.contains(x, y) || index >= static_cast<int>(pal.size()))
                continue;
            img(x, y) = pal[static_cast<std::size_t>(index)];
        }
        return img;
    }
}

}  // namespace vesselmat::detail

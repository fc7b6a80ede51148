#pragma once

#include <cstdint>
#include <span>

#include "vesselmat/image.hpp"

namespace vesselmat::detail {

bool looks_like_gif(std::span<const std::uint8_t> bytes);
RgbImage decode_gif(std::span<const std::uint8_t> bytes);

}  // namespace vesselmat::detail

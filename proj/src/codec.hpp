#pragma once

#include "croprow/image.hpp"

namespace croprow {

DecodedImage decode_pnm(std::span<const std::uint8_t> bytes);
DecodedImage decode_png(std::span<const std::uint8_t> bytes);

} // namespace croprow

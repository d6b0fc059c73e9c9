#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace nirdehaze::detail {

/// Decoded pixel data before normalization: row-major, channel-interleaved,
/// one uint16 slot per sample regardless of source depth.
struct RawImage {
    int width = 0;
    int height = 0;
    int channels = 0;   // 1 or 3
    int bit_depth = 0;  // 8 or 16
    std::vector<std::uint16_t> samples;
};

bool looks_like_png(const std::uint8_t* data, std::size_t size);
bool looks_like_tiff(const std::uint8_t* data, std::size_t size);

RawImage decode_png_bytes(const std::vector<std::uint8_t>& bytes, const std::string& context);
RawImage decode_tiff_bytes(const std::vector<std::uint8_t>& bytes, const std::string& context);

}  // namespace nirdehaze::detail

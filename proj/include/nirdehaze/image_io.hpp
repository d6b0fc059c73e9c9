#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "nirdehaze/types.hpp"

namespace nirdehaze {

/// Loads a registered RGB+NIR pair. PNG or TIFF, 8- or 16-bit, grayscale or
/// RGB; samples are scaled into [0,1]. A 3-channel NIR file is reduced to one
/// plane by channel averaging. Dimensions must match.
ImagePair load_pair(const std::string& rgb_path, const std::string& nir_path);

RgbImage load_rgb(const std::string& path);
NirImage load_nir(const std::string& path);

/// Clamp to [0,1], quantize round-half-up, write an RGB PNG.
void save_image(const RgbImage& img, const std::string& path, int bitdepth = 8);

/// Round-half-up quantization of a [0,1] sample onto [0, maxval].
inline int quantize_sample(double v, int maxval) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<int>(v * maxval + 0.5);
}

}  // namespace nirdehaze

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nirdehaze/types.hpp"

namespace nirdehaze::testsupport {

/// Synthetic registered pair: a depth-attenuated hazy RGB rendering of a
/// clear scene plus its near haze-free NIR counterpart. Distance (and haze
/// density) grows toward the top rows; the airlight is slightly blue so the
/// blue channel tracks haze density.
struct ScenePair {
    RgbImage rgb;        // hazy observation
    NirImage nir;        // haze-free counterpart
    RgbImage rgb_clear;  // underlying scene, for reference
};

ScenePair make_hazy_scene(std::uint32_t seed, Index rows, Index cols);

/// Uniform random plane in [lo, hi], deterministic in the seed.
Plane random_plane(std::uint32_t seed, Index rows, Index cols, double lo = 0.0, double hi = 1.0);

/// Minimal uncompressed strip TIFF writer for decoder fixtures. `samples`
/// is row-major and channel-interleaved, one value per sample.
void write_tiff(const std::string& path, int width, int height, int channels, int bit_depth,
                const std::vector<std::uint16_t>& samples, bool big_endian = false);

}  // namespace nirdehaze::testsupport

#pragma once

#include "nirdehaze/types.hpp"

namespace nirdehaze {

/// Full-range BT.601 luminance/chrominance. y in [0,1]; cb, cr in [0,1]
/// with 0.5 as neutral chroma.
struct YCbCrImage {
    Plane y, cb, cr;

    Index rows() const { return y.rows(); }
    Index cols() const { return y.cols(); }
};

enum class HazeMapMode {
    scale,   // p = blue plane, already in [0,1]
    minmax,  // p stretched so min -> 0, max -> 1
};

/// Per-pixel weight in [0,1] derived from the blue channel. High weight
/// means heavy haze, so the fused result leans on the NIR data there.
struct HazeWeightMap {
    Plane p;
    HazeMapMode mode = HazeMapMode::scale;
};

/// Y = 0.299 R + 0.587 G + 0.114 B; Cb = 0.564 (B-Y) + 0.5; Cr = 0.713 (R-Y) + 0.5.
YCbCrImage rgb_to_ycbcr(const RgbImage& img);

/// Algebraic inverse of rgb_to_ycbcr, clamped to [0,1].
RgbImage ycbcr_to_rgb(const YCbCrImage& img);

/// minmax on a constant blue plane yields p = 0.5 everywhere.
HazeWeightMap compute_haze_map(const RgbImage& img, HazeMapMode mode = HazeMapMode::scale);

/// 2x2 box-average pooling applied `level` times, replicate-padding odd
/// dimensions the same way the wavelet decomposition does, so the result
/// matches the coefficient grid dimensions at that level.
HazeWeightMap downsample_map(const HazeWeightMap& map, int level);

}  // namespace nirdehaze

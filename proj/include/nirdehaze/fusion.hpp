#pragma once

#include <stdexcept>
#include <vector>

#include "nirdehaze/colorspace.hpp"
#include "nirdehaze/types.hpp"
#include "nirdehaze/wavelet.hpp"

namespace nirdehaze {

struct FusionConfig {
    int n_levels = 2;
    HazeMapMode haze_map_mode = HazeMapMode::scale;
    int histogram_bins = 256;

    void validate() const {
        if (n_levels < 1) throw std::invalid_argument("FusionConfig: n_levels must be >= 1");
        if (histogram_bins < 2)
            throw std::invalid_argument("FusionConfig: histogram_bins must be >= 2");
    }
};

/// Running reconstruction produced after fusing one pyramid level, recorded
/// coarsest-first while working back up to full resolution.
struct FusedLevelImage {
    Plane z;
    int level = 0;
};

/// Haze-weighted average of approximation coefficients: out = p*na + (1-p)*la.
/// High weight leans on the NIR data.
template <typename D1, typename D2, typename D3>
PlaneT<typename D1::Scalar> fuse_approx(const Eigen::ArrayBase<D1>& la,
                                        const Eigen::ArrayBase<D2>& na,
                                        const Eigen::ArrayBase<D3>& p) {
    if (na.rows() != la.rows() || na.cols() != la.cols() || p.rows() != la.rows() ||
        p.cols() != la.cols())
        throw DimensionMismatch("fuse_approx: grids differ in size");
    return p * na + (1 - p) * la;
}

/// Choose-max detail selection on per-coefficient absolute value; ties keep
/// the luma coefficient.
template <typename D1, typename D2>
PlaneT<typename D1::Scalar> fuse_detail(const Eigen::ArrayBase<D1>& lc,
                                        const Eigen::ArrayBase<D2>& nc) {
    if (nc.rows() != lc.rows() || nc.cols() != lc.cols())
        throw DimensionMismatch("fuse_detail: grids differ in size");
    return (nc.abs() > lc.abs()).select(nc.derived(), lc.derived());
}

/// CDF specification over `bins` equal-width histograms, each spanning its
/// input's own [min,max] range. Output values lie within the reference range.
Plane histogram_match(const Plane& source, const Plane& reference, int bins);

/// Bottom-up pyramid fusion: weighted-average approximations, choose-max
/// details, and (above the coarsest level) histogram matching of the running
/// reconstruction against the fused approximation before each synthesis step.
/// `trace`, when non-null, receives the per-level reconstructions.
Plane fuse_pyramids(const HaarPyramid& luma_pyr, const HaarPyramid& nir_pyr,
                    const HazeWeightMap& map, const FusionConfig& cfg,
                    std::vector<FusedLevelImage>* trace = nullptr);

/// Full pipeline with an explicitly supplied haze-weight map.
RgbImage dehaze(const ImagePair& pair, const HazeWeightMap& map, const FusionConfig& cfg);

/// Full pipeline: split luma, build the haze map from the blue channel, fuse
/// the luma and NIR pyramids, match against the original luma, blend by the
/// haze map, and recombine the untouched chroma.
RgbImage dehaze(const ImagePair& pair, const FusionConfig& cfg);

}  // namespace nirdehaze

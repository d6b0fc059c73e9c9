#include "nirdehaze/fusion.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace nirdehaze {

namespace {

// Piecewise-linear CDF over equal-width bins spanning [lo, lo + bins*width].
struct BinnedCdf {
    double lo = 0.0;
    double width = 0.0;
    std::vector<double> cum;  // cum[i] = mass of bins 0..i, cum.back() == 1
};

BinnedCdf build_cdf(const Plane& x, int bins) {
    BinnedCdf c;
    c.lo = x.minCoeff();
    const double hi = x.maxCoeff();
    c.width = (hi - c.lo) / bins;
    std::vector<std::int64_t> counts(static_cast<size_t>(bins), 0);
    const double* v = x.data();
    const Index n = x.size();
    for (Index i = 0; i < n; ++i) {
        const auto b = static_cast<Index>((v[i] - c.lo) / c.width);
        ++counts[static_cast<size_t>(std::clamp<Index>(b, 0, bins - 1))];
    }
    c.cum.resize(static_cast<size_t>(bins));
    std::int64_t run = 0;
    for (int i = 0; i < bins; ++i) {
        run += counts[static_cast<size_t>(i)];
        c.cum[static_cast<size_t>(i)] = static_cast<double>(run) / static_cast<double>(n);
    }
    c.cum.back() = 1.0;
    return c;
}

double eval_cdf(const BinnedCdf& c, double v) {
    const int bins = static_cast<int>(c.cum.size());
    const auto raw = static_cast<Index>((v - c.lo) / c.width);
    const int b = static_cast<int>(std::clamp<Index>(raw, 0, bins - 1));
    const double prev = b == 0 ? 0.0 : c.cum[static_cast<size_t>(b - 1)];
    double frac = (v - (c.lo + b * c.width)) / c.width;
    frac = std::clamp(frac, 0.0, 1.0);
    return prev + frac * (c.cum[static_cast<size_t>(b)] - prev);
}

// Inverse through the first bin whose cumulative mass exceeds q, so flat
// (empty-bin) stretches of the CDF resolve to their upper edge. q == 1 maps
// to the upper edge of the last populated bin.
double invert_cdf(const BinnedCdf& c, double q) {
    const int bins = static_cast<int>(c.cum.size());
    const auto it = std::upper_bound(c.cum.begin(), c.cum.end(), q);
    if (it == c.cum.end()) {
        int last = bins - 1;
        while (last > 0 && c.cum[static_cast<size_t>(last)] == c.cum[static_cast<size_t>(last - 1)])
            --last;
        return c.lo + (last + 1) * c.width;
    }
    const int b = static_cast<int>(it - c.cum.begin());
    const double prev = b == 0 ? 0.0 : c.cum[static_cast<size_t>(b - 1)];
    const double rise = c.cum[static_cast<size_t>(b)] - prev;
    const double frac = rise > 0.0 ? (q - prev) / rise : 0.0;
    return c.lo + (b + frac) * c.width;
}

}  // namespace

Plane histogram_match(const Plane& source, const Plane& reference, int bins) {
    if (source.size() == 0 || reference.size() == 0)
        throw EmptyInput("histogram_match: empty input");
    if (bins < 2) throw std::invalid_argument("histogram_match: bins must be >= 2");

    const double rmin = reference.minCoeff();
    const double rmax = reference.maxCoeff();
    if (rmin == rmax) return Plane::Constant(source.rows(), source.cols(), rmin);

    const BinnedCdf ref = build_cdf(reference, bins);
    const double smin = source.minCoeff();
    const double smax = source.maxCoeff();
    if (smin == smax) {
        // A constant source carries all its mass at one value (CDF 1): map to
        // the reference value where the reference CDF first reaches 1.
        return Plane::Constant(source.rows(), source.cols(),
                               std::clamp(invert_cdf(ref, 1.0), rmin, rmax));
    }

    const BinnedCdf src = build_cdf(source, bins);
    Plane out(source.rows(), source.cols());
    const double* in = source.data();
    double* o = out.data();
    const Index n = source.size();
    for (Index i = 0; i < n; ++i) o[i] = invert_cdf(ref, eval_cdf(src, in[i]));
    return out.max(rmin).min(rmax);
}

Plane fuse_pyramids(const HaarPyramid& luma_pyr, const HaarPyramid& nir_pyr,
                    const HazeWeightMap& map, const FusionConfig& cfg,
                    std::vector<FusedLevelImage>* trace) {
    cfg.validate();
    validate(luma_pyr);
    validate(nir_pyr);
    const int n = luma_pyr.n_levels();
    if (nir_pyr.n_levels() != n)
        throw PyramidMismatch("fuse_pyramids: pyramids have different level counts");
    for (int i = 0; i < n; ++i) {
        if (dims_of(luma_pyr.levels[static_cast<size_t>(i)].a) !=
                dims_of(nir_pyr.levels[static_cast<size_t>(i)].a) ||
            luma_pyr.original_dims[static_cast<size_t>(i)] !=
                nir_pyr.original_dims[static_cast<size_t>(i)])
            throw PyramidMismatch("fuse_pyramids: pyramids differ in size at level " +
                                  std::to_string(i + 1));
    }
    if (dims_of(map.p) != luma_pyr.original_dims[0])
        throw DimensionMismatch("fuse_pyramids: haze map does not match full-resolution dims");

    // Per-level maps, pooled to the coefficient grid dimensions.
    std::vector<Plane> level_maps(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) {
        HazeWeightMap pooled = downsample_map(map, k);
        const auto& la = luma_pyr.levels[static_cast<size_t>(k - 1)].a;
        if (dims_of(pooled.p) != dims_of(la))
            throw DimensionMismatch("fuse_pyramids: pooled map does not match level " +
                                    std::to_string(k) + " grids");
        level_maps[static_cast<size_t>(k - 1)] = std::move(pooled.p);
    }

    if (trace) trace->clear();
    Plane z;
    for (int k = n; k >= 1; --k) {
        const auto& lc = luma_pyr.levels[static_cast<size_t>(k - 1)];
        const auto& nc = nir_pyr.levels[static_cast<size_t>(k - 1)];
        const Plane approx = fuse_approx(lc.a, nc.a, level_maps[static_cast<size_t>(k - 1)]);

        CoefficientSet fused;
        fused.a = k == n ? approx : histogram_match(z, approx, cfg.histogram_bins);
        fused.h = fuse_detail(lc.h, nc.h);
        fused.v = fuse_detail(lc.v, nc.v);
        fused.d = fuse_detail(lc.d, nc.d);
        z = idwt2_level(fused, luma_pyr.original_dims[static_cast<size_t>(k - 1)]);
        if (trace) trace->push_back(FusedLevelImage{z, k});
    }
    return z;
}

RgbImage dehaze(const ImagePair& pair, const HazeWeightMap& map, const FusionConfig& cfg) {
    cfg.validate();
    validate(pair);
    if (dims_of(map.p) != Dims{pair.rgb.rows(), pair.rgb.cols()})
        throw DimensionMismatch("dehaze: haze map does not match image dims");

    const YCbCrImage ycbcr = rgb_to_ycbcr(pair.rgb);
    const HaarPyramid luma_pyr = decompose(ycbcr.y, cfg.n_levels);
    const HaarPyramid nir_pyr = decompose(pair.nir.plane, cfg.n_levels);

    const Plane z = fuse_pyramids(luma_pyr, nir_pyr, map, cfg);
    const Plane matched = histogram_match(z, ycbcr.y, cfg.histogram_bins);
    const Plane y_out = map.p * matched + (1.0 - map.p) * ycbcr.y;

    return ycbcr_to_rgb(YCbCrImage{y_out, ycbcr.cb, ycbcr.cr});
}

RgbImage dehaze(const ImagePair& pair, const FusionConfig& cfg) {
    return dehaze(pair, compute_haze_map(pair.rgb, cfg.haze_map_mode), cfg);
}

}  // namespace nirdehaze

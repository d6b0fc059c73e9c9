#pragma once

#include "nirdehaze/types.hpp"

namespace nirdehaze {

/// Scalar quality measures for one (original, restored) pair. entropy,
/// std_dev and sf describe the restored image alone; cc and ssim compare the
/// two; e, sigma_sat and r_bar are the blind contrast-restoration measures.
struct MetricsReport {
    double entropy = 0;    // bits
    double std_dev = 0;    // sample units
    double ssim = 0;       // [-1,1]
    double cc = 0;         // [-1,1]
    double sf = 0;         // sample units
    double e = 0;          // rate of new visible edges, >= -1
    double sigma_sat = 0;  // percent of newly saturated pixels, [0,100]
    double r_bar = 1;      // geometric mean gradient ratio, > 0
};

/// Shannon entropy of the 256-bin histogram over [0,1], log base 2.
double entropy(const Plane& img);

/// Population standard deviation over all samples.
double std_dev(const Plane& img);

/// Centered cross-correlation normalized by the product of centered norms.
/// Throws DegenerateInput when either image is constant.
double correlation_coefficient(const Plane& i, const Plane& f);

/// sqrt(RF^2 + CF^2), where RF/CF are the RMS of horizontal/vertical
/// neighbor differences with both sums divided by the full pixel count.
double spatial_frequency(const Plane& f);

/// Single-scale SSIM: 8x8 uniform sliding window (stride 1),
/// C1 = (0.01 L)^2, C2 = (0.03 L)^2 with dynamic range L = 1, mean over windows.
double ssim(const Plane& i, const Plane& f);

struct BlindAssessment {
    double e = 0;
    double sigma_sat = 0;
    double r_bar = 1;
};

/// Blind contrast-restoration measures. A pixel is a visible edge when its
/// Sobel gradient magnitude (normalized so a unit ramp has magnitude 1)
/// exceeds 0.05, i.e. 5% of the dynamic range per pixel step; the one-pixel
/// border is excluded. e is the rate of new visible edges, r_bar the
/// geometric mean of gradient-magnitude ratios at restored visible edges,
/// sigma_sat the percentage of pixels saturated by the restoration.
BlindAssessment blind_assessment(const Plane& original, const Plane& restored);

/// Sobel gradient magnitude with the normalization used by
/// blind_assessment; border pixels are set to 0.
Plane sobel_magnitude(const Plane& img);

}  // namespace nirdehaze

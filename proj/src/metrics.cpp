#include "nirdehaze/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace nirdehaze {

namespace {

constexpr double kEdgeVisibilityThreshold = 0.05;
constexpr double kRatioEpsilon = 1e-12;

// Summed-area table with a zero first row/column: S(i+1,j+1) = sum of x
// over [0..i]x[0..j].
Plane integral_image(const Plane& x) {
    const Index r = x.rows(), c = x.cols();
    Plane s = Plane::Zero(r + 1, c + 1);
    for (Index j = 0; j < c; ++j) {
        double col_run = 0.0;
        for (Index i = 0; i < r; ++i) {
            col_run += x(i, j);
            s(i + 1, j + 1) = s(i + 1, j) + col_run;
        }
    }
    return s;
}

inline double window_sum(const Plane& s, Index i, Index j, Index w) {
    return s(i + w, j + w) - s(i, j + w) - s(i + w, j) + s(i, j);
}

}  // namespace

double entropy(const Plane& img) {
    if (img.size() == 0) throw EmptyInput("entropy: empty image");
    std::array<std::int64_t, 256> counts{};
    const double* v = img.data();
    const Index n = img.size();
    for (Index i = 0; i < n; ++i) {
        auto b = static_cast<Index>(v[i] * 256.0);
        counts[static_cast<size_t>(std::clamp<Index>(b, 0, 255))]++;
    }
    double h = 0.0;
    for (const auto count : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(n);
        h -= p * std::log2(p);
    }
    return h;
}

double std_dev(const Plane& img) {
    if (img.size() == 0) throw EmptyInput("std_dev: empty image");
    const double mean = img.mean();
    return std::sqrt((img - mean).square().sum() / static_cast<double>(img.size()));
}

double correlation_coefficient(const Plane& i, const Plane& f) {
    if (i.size() == 0) throw EmptyInput("correlation_coefficient: empty image");
    if (dims_of(i) != dims_of(f))
        throw DimensionMismatch("correlation_coefficient: images differ in size");
    const Plane ic = i - i.mean();
    const Plane fc = f - f.mean();
    const double si = ic.square().sum();
    const double sf = fc.square().sum();
    if (si == 0.0 || sf == 0.0)
        throw DegenerateInput("correlation_coefficient: constant image has no structure");
    return (ic * fc).sum() / std::sqrt(si * sf);
}

double spatial_frequency(const Plane& f) {
    if (f.rows() < 2 || f.cols() < 2)
        throw TooSmall("spatial_frequency: needs at least 2x2 samples");
    const Index m = f.rows(), n = f.cols();
    const double mn = static_cast<double>(m) * static_cast<double>(n);
    const double rf2 = (f.rightCols(n - 1) - f.leftCols(n - 1)).square().sum() / mn;
    const double cf2 = (f.bottomRows(m - 1) - f.topRows(m - 1)).square().sum() / mn;
    return std::sqrt(rf2 + cf2);
}

double ssim(const Plane& i, const Plane& f) {
    if (dims_of(i) != dims_of(f)) throw DimensionMismatch("ssim: images differ in size");
    constexpr Index kWindow = 8;
    if (i.rows() < kWindow || i.cols() < kWindow)
        throw TooSmall("ssim: needs at least 8x8 samples");
    constexpr double kC1 = 0.01 * 0.01;  // (0.01 * L)^2, L = 1
    constexpr double kC2 = 0.03 * 0.03;

    const Plane sx = integral_image(i);
    const Plane sy = integral_image(f);
    const Plane sxx = integral_image(i.square());
    const Plane syy = integral_image(f.square());
    const Plane sxy = integral_image(i * f);

    const double n = kWindow * kWindow;
    double total = 0.0;
    Index windows = 0;
    for (Index r = 0; r + kWindow <= i.rows(); ++r) {
        for (Index c = 0; c + kWindow <= i.cols(); ++c) {
            const double mx = window_sum(sx, r, c, kWindow) / n;
            const double my = window_sum(sy, r, c, kWindow) / n;
            const double vx = window_sum(sxx, r, c, kWindow) / n - mx * mx;
            const double vy = window_sum(syy, r, c, kWindow) / n - my * my;
            const double cov = window_sum(sxy, r, c, kWindow) / n - mx * my;
            total += ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
                     ((mx * mx + my * my + kC1) * (vx + vy + kC2));
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

Plane sobel_magnitude(const Plane& img) {
    const Index r = img.rows(), c = img.cols();
    Plane mag = Plane::Zero(r, c);
    if (r < 3 || c < 3) return mag;
    for (Index i = 1; i + 1 < r; ++i) {
        for (Index j = 1; j + 1 < c; ++j) {
            const double gx = (img(i - 1, j + 1) + 2.0 * img(i, j + 1) + img(i + 1, j + 1) -
                               img(i - 1, j - 1) - 2.0 * img(i, j - 1) - img(i + 1, j - 1)) /
                              8.0;
            const double gy = (img(i + 1, j - 1) + 2.0 * img(i + 1, j) + img(i + 1, j + 1) -
                               img(i - 1, j - 1) - 2.0 * img(i - 1, j) - img(i - 1, j + 1)) /
                              8.0;
            mag(i, j) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return mag;
}

BlindAssessment blind_assessment(const Plane& original, const Plane& restored) {
    if (original.size() == 0) throw EmptyInput("blind_assessment: empty image");
    if (dims_of(original) != dims_of(restored))
        throw DimensionMismatch("blind_assessment: images differ in size");

    const Plane mag_o = sobel_magnitude(original);
    const Plane mag_r = sobel_magnitude(restored);

    const auto visible_o = mag_o > kEdgeVisibilityThreshold;
    const auto visible_r = mag_r > kEdgeVisibilityThreshold;
    const auto n_o = static_cast<double>(visible_o.count());
    const auto n_r = static_cast<double>(visible_r.count());
    if (n_o == 0.0) throw NoVisibleEdges("blind_assessment: original has no visible edges");

    BlindAssessment out;
    out.e = (n_r - n_o) / n_o;

    if (n_r > 0.0) {
        const double log_sum =
            visible_r.select((mag_r / (mag_o + kRatioEpsilon)).log(), Plane::Zero(mag_r.rows(), mag_r.cols()))
                .sum();
        out.r_bar = std::exp(log_sum / n_r);
    }

    const auto sat_r = (restored == 0.0) || (restored == 1.0);
    const auto sat_o = (original == 0.0) || (original == 1.0);
    const auto newly = static_cast<double>((sat_r && !sat_o).count());
    out.sigma_sat = 100.0 * newly / static_cast<double>(original.size());
    return out;
}

}  // namespace nirdehaze

#include "nirdehaze/colorspace.hpp"

#include <stdexcept>

#include "nirdehaze/wavelet.hpp"

namespace nirdehaze {

namespace {
constexpr double kYR = 0.299;
constexpr double kYG = 0.587;
constexpr double kYB = 0.114;
constexpr double kCbScale = 0.564;
constexpr double kCrScale = 0.713;
}  // namespace

YCbCrImage rgb_to_ycbcr(const RgbImage& img) {
    validate(img);
    YCbCrImage out;
    out.y = kYR * img.r + kYG * img.g + kYB * img.b;
    out.cb = kCbScale * (img.b - out.y) + 0.5;
    out.cr = kCrScale * (img.r - out.y) + 0.5;
    return out;
}

RgbImage ycbcr_to_rgb(const YCbCrImage& img) {
    if (img.y.size() == 0) throw EmptyInput("ycbcr_to_rgb: empty image");
    if (dims_of(img.cb) != dims_of(img.y) || dims_of(img.cr) != dims_of(img.y))
        throw DimensionMismatch("ycbcr_to_rgb: channel planes differ in size");

    RgbImage out;
    out.r = img.y + (img.cr - 0.5) / kCrScale;
    out.b = img.y + (img.cb - 0.5) / kCbScale;
    out.g = (img.y - kYR * out.r - kYB * out.b) / kYG;
    out.r = out.r.max(0.0).min(1.0);
    out.g = out.g.max(0.0).min(1.0);
    out.b = out.b.max(0.0).min(1.0);
    return out;
}

HazeWeightMap compute_haze_map(const RgbImage& img, HazeMapMode mode) {
    validate(img);
    HazeWeightMap map;
    map.mode = mode;
    if (mode == HazeMapMode::scale) {
        map.p = img.b;
        return map;
    }
    const double lo = img.b.minCoeff();
    const double hi = img.b.maxCoeff();
    if (lo == hi) {
        map.p = Plane::Constant(img.rows(), img.cols(), 0.5);
    } else {
        map.p = (img.b - lo) / (hi - lo);
    }
    return map;
}

HazeWeightMap downsample_map(const HazeWeightMap& map, int level) {
    if (level < 1) throw std::invalid_argument("downsample_map: level must be >= 1");
    if (map.p.size() == 0) throw EmptyInput("downsample_map: empty map");

    Plane cur = map.p;
    for (int i = 0; i < level; ++i) {
        const Plane p = replicate_pad_to_even(cur);
        const Index pr = p.rows(), pc = p.cols();
        const auto er = Eigen::seq(0, pr - 2, 2), orr = Eigen::seq(1, pr - 1, 2);
        const auto ec = Eigen::seq(0, pc - 2, 2), oc = Eigen::seq(1, pc - 1, 2);
        cur = 0.25 * (p(er, ec) + p(er, oc) + p(orr, ec) + p(orr, oc));
    }
    return HazeWeightMap{std::move(cur), map.mode};
}

}  // namespace nirdehaze

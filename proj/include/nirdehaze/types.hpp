#pragma once

#include <Eigen/Core>

#include "nirdehaze/errors.hpp"

namespace nirdehaze {

using Index = Eigen::Index;

/// A single-channel 2-D grid of real-valued samples. Pipeline images use
/// [0,1]; wavelet coefficient grids are unbounded.
template <typename Scalar>
using PlaneT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Plane = PlaneT<double>;

struct Dims {
    Index rows = 0;
    Index cols = 0;

    friend bool operator==(const Dims&, const Dims&) = default;
};

template <typename Derived>
Dims dims_of(const Eigen::ArrayBase<Derived>& p) {
    return Dims{p.rows(), p.cols()};
}

/// Color image as three planes with samples in [0,1].
struct RgbImage {
    Plane r, g, b;

    Index rows() const { return r.rows(); }
    Index cols() const { return r.cols(); }
};

/// Near-infrared image, one plane with samples in [0,1].
struct NirImage {
    Plane plane;

    Index rows() const { return plane.rows(); }
    Index cols() const { return plane.cols(); }
};

/// A registered RGB+NIR pair: both images share dimensions.
struct ImagePair {
    RgbImage rgb;
    NirImage nir;
};

inline void validate(const RgbImage& img) {
    if (img.r.size() == 0) throw EmptyInput("RgbImage: empty planes");
    if (dims_of(img.g) != dims_of(img.r) || dims_of(img.b) != dims_of(img.r))
        throw DimensionMismatch("RgbImage: channel planes differ in size");
}

inline void validate(const ImagePair& pair) {
    validate(pair.rgb);
    if (pair.nir.plane.size() == 0) throw EmptyInput("ImagePair: empty NIR plane");
    if (pair.nir.rows() != pair.rgb.rows() || pair.nir.cols() != pair.rgb.cols())
        throw DimensionMismatch("ImagePair: RGB and NIR dimensions differ (pair is not registered)");
}

}  // namespace nirdehaze

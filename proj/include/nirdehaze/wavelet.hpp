#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nirdehaze/errors.hpp"
#include "nirdehaze/types.hpp"

namespace nirdehaze {

/// One decomposition level: approximation plus horizontal, vertical and
/// diagonal detail. All four grids share dimensions ceil(parent/2).
/// h is the column high-pass of the row low-pass, v the row high-pass of
/// the column low-pass, d the high-pass in both directions.
template <typename Scalar>
struct CoefficientSetT {
    PlaneT<Scalar> a, h, v, d;
};

using CoefficientSet = CoefficientSetT<double>;

/// Multi-level coefficient stack, finest (level 1) first. original_dims[k]
/// holds the pre-padding dimensions of the grid that level k+1 decomposed,
/// so synthesis can crop replicate-padding exactly.
template <typename Scalar>
struct HaarPyramidT {
    std::vector<CoefficientSetT<Scalar>> levels;
    std::vector<Dims> original_dims;

    int n_levels() const { return static_cast<int>(levels.size()); }
};

using HaarPyramid = HaarPyramidT<double>;

/// Replicates the last row/column so both dimensions are even.
template <typename Scalar>
PlaneT<Scalar> replicate_pad_to_even(const PlaneT<Scalar>& x) {
    const Index r = x.rows(), c = x.cols();
    const Index pr = r + (r % 2), pc = c + (c % 2);
    if (pr == r && pc == c) return x;
    PlaneT<Scalar> out(pr, pc);
    out.topLeftCorner(r, c) = x;
    if (pc > c) out.block(0, c, r, 1) = x.col(c - 1);
    if (pr > r) out.row(pr - 1) = out.row(pr - 2);
    return out;
}

/// Single-level separable orthonormal Haar analysis. Odd dimensions are
/// replicate-padded to even before the transform; the caller records the
/// original size for synthesis. Energy is conserved on even-sized input.
template <typename Derived>
CoefficientSetT<typename Derived::Scalar> dwt2_level(const Eigen::ArrayBase<Derived>& plane) {
    using Scalar = typename Derived::Scalar;
    if (plane.size() == 0) throw EmptyInput("dwt2_level: empty plane");

    const PlaneT<Scalar> p = replicate_pad_to_even<Scalar>(plane.derived());
    const Index pr = p.rows(), pc = p.cols();
    const Scalar k = Scalar(1) / std::sqrt(Scalar(2));

    const auto even_cols = Eigen::seq(0, pc - 2, 2);
    const auto odd_cols = Eigen::seq(1, pc - 1, 2);
    const PlaneT<Scalar> row_low = (p(Eigen::all, even_cols) + p(Eigen::all, odd_cols)) * k;
    const PlaneT<Scalar> row_high = (p(Eigen::all, even_cols) - p(Eigen::all, odd_cols)) * k;

    const auto even_rows = Eigen::seq(0, pr - 2, 2);
    const auto odd_rows = Eigen::seq(1, pr - 1, 2);
    CoefficientSetT<Scalar> cs;
    cs.a = (row_low(even_rows, Eigen::all) + row_low(odd_rows, Eigen::all)) * k;
    cs.h = (row_low(even_rows, Eigen::all) - row_low(odd_rows, Eigen::all)) * k;
    cs.v = (row_high(even_rows, Eigen::all) + row_high(odd_rows, Eigen::all)) * k;
    cs.d = (row_high(even_rows, Eigen::all) - row_high(odd_rows, Eigen::all)) * k;
    return cs;
}

/// Exact inverse of dwt2_level, cropped to target_dims. target_dims must
/// lie within one replicate-padded row/column of 2x the coefficient grid.
template <typename Scalar>
PlaneT<Scalar> idwt2_level(const CoefficientSetT<Scalar>& cs, Dims target_dims) {
    const Index hr = cs.a.rows(), hc = cs.a.cols();
    if (hr == 0 || hc == 0) throw EmptyInput("idwt2_level: empty coefficient grids");
    if (dims_of(cs.h) != dims_of(cs.a) || dims_of(cs.v) != dims_of(cs.a) ||
        dims_of(cs.d) != dims_of(cs.a))
        throw DimensionMismatch("idwt2_level: coefficient grids differ in size");
    if (target_dims.rows < 2 * hr - 1 || target_dims.rows > 2 * hr ||
        target_dims.cols < 2 * hc - 1 || target_dims.cols > 2 * hc)
        throw DimensionMismatch("idwt2_level: target dimensions incompatible with coefficient grids");

    const Scalar k = Scalar(1) / std::sqrt(Scalar(2));
    const auto even_rows = Eigen::seq(0, 2 * hr - 2, 2);
    const auto odd_rows = Eigen::seq(1, 2 * hr - 1, 2);

    PlaneT<Scalar> row_low(2 * hr, hc), row_high(2 * hr, hc);
    row_low(even_rows, Eigen::all) = (cs.a + cs.h) * k;
    row_low(odd_rows, Eigen::all) = (cs.a - cs.h) * k;
    row_high(even_rows, Eigen::all) = (cs.v + cs.d) * k;
    row_high(odd_rows, Eigen::all) = (cs.v - cs.d) * k;

    const auto even_cols = Eigen::seq(0, 2 * hc - 2, 2);
    const auto odd_cols = Eigen::seq(1, 2 * hc - 1, 2);
    PlaneT<Scalar> out(2 * hr, 2 * hc);
    out(Eigen::all, even_cols) = (row_low + row_high) * k;
    out(Eigen::all, odd_cols) = (row_low - row_high) * k;
    return out.topLeftCorner(target_dims.rows, target_dims.cols);
}

/// N-level decomposition: level k+1 transforms level k's approximation.
/// A level whose input grid has already shrunk to 1x1 cannot be split
/// further and raises TooManyLevels.
template <typename Derived>
HaarPyramidT<typename Derived::Scalar> decompose(const Eigen::ArrayBase<Derived>& plane,
                                                 int n_levels) {
    using Scalar = typename Derived::Scalar;
    if (n_levels < 1) throw TooManyLevels("decompose: n_levels must be >= 1");
    if (plane.size() == 0) throw EmptyInput("decompose: empty plane");

    HaarPyramidT<Scalar> pyr;
    pyr.levels.reserve(static_cast<size_t>(n_levels));
    pyr.original_dims.reserve(static_cast<size_t>(n_levels));
    PlaneT<Scalar> cur = plane.derived();
    for (int level = 1; level <= n_levels; ++level) {
        if (cur.rows() == 1 && cur.cols() == 1)
            throw TooManyLevels("decompose: approximation grid reached 1x1 at level " +
                                std::to_string(level));
        pyr.original_dims.push_back(dims_of(cur));
        CoefficientSetT<Scalar> cs = dwt2_level(cur);
        cur = cs.a;
        pyr.levels.push_back(std::move(cs));
    }
    return pyr;
}

template <typename Scalar>
void validate(const HaarPyramidT<Scalar>& pyr) {
    const size_t n = pyr.levels.size();
    if (n == 0 || pyr.original_dims.size() != n)
        throw CorruptPyramid("pyramid: level/dims bookkeeping inconsistent");
    for (size_t i = 0; i < n; ++i) {
        const auto& cs = pyr.levels[i];
        if (dims_of(cs.h) != dims_of(cs.a) || dims_of(cs.v) != dims_of(cs.a) ||
            dims_of(cs.d) != dims_of(cs.a))
            throw CorruptPyramid("pyramid: coefficient grids differ in size at level " +
                                 std::to_string(i + 1));
        const Dims in = pyr.original_dims[i];
        const Dims expect{(in.rows + 1) / 2, (in.cols + 1) / 2};
        if (dims_of(cs.a) != expect)
            throw CorruptPyramid("pyramid: grid size does not halve recorded input at level " +
                                 std::to_string(i + 1));
        if (i > 0 && dims_of(pyr.levels[i - 1].a) != in)
            throw CorruptPyramid("pyramid: recorded input dims disagree with finer level " +
                                 std::to_string(i));
    }
}

/// Folds idwt2_level from coarsest to finest; exact inverse of decompose.
template <typename Scalar>
PlaneT<Scalar> reconstruct(const HaarPyramidT<Scalar>& pyr) {
    validate(pyr);
    PlaneT<Scalar> cur = pyr.levels.back().a;
    for (size_t i = pyr.levels.size(); i-- > 0;) {
        CoefficientSetT<Scalar> cs{std::move(cur), pyr.levels[i].h, pyr.levels[i].v,
                                   pyr.levels[i].d};
        cur = idwt2_level(cs, pyr.original_dims[i]);
    }
    return cur;
}

}  // namespace nirdehaze

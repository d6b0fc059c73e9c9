#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nirdehaze/metrics.hpp"
#include "support/synthetic.hpp"

using namespace nirdehaze;
using testsupport::random_plane;

namespace {

// Brute-force SSIM oracle: explicit per-window statistics, no integral images.
double reference_ssim(const Plane& x, const Plane& y) {
    constexpr Index w = 8;
    constexpr double c1 = 0.0001, c2 = 0.0009;
    double total = 0.0;
    Index count = 0;
    for (Index r = 0; r + w <= x.rows(); ++r) {
        for (Index c = 0; c + w <= x.cols(); ++c) {
            double mx = 0, my = 0;
            for (Index i = 0; i < w; ++i)
                for (Index j = 0; j < w; ++j) {
                    mx += x(r + i, c + j);
                    my += y(r + i, c + j);
                }
            mx /= w * w;
            my /= w * w;
            double vx = 0, vy = 0, cov = 0;
            for (Index i = 0; i < w; ++i)
                for (Index j = 0; j < w; ++j) {
                    const double dx = x(r + i, c + j) - mx;
                    const double dy = y(r + i, c + j) - my;
                    vx += dx * dx;
                    vy += dy * dy;
                    cov += dx * dy;
                }
            vx /= w * w;
            vy /= w * w;
            cov /= w * w;
            total += ((2 * mx * my + c1) * (2 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

}  // namespace

TEST_CASE("entropy of flat, binary and uniform histograms") {
    CHECK(entropy(Plane::Constant(8, 8, 0.42)) == doctest::Approx(0.0).epsilon(1e-12));

    Plane half(2, 8);
    half.row(0).setConstant(0.0);
    half.row(1).setConstant(1.0);
    CHECK(entropy(half) == doctest::Approx(1.0).epsilon(1e-12));

    Plane uniform(16, 16);
    for (Index i = 0; i < 16; ++i)
        for (Index j = 0; j < 16; ++j)
            uniform(i, j) = (static_cast<double>(16 * i + j) + 0.5) / 256.0;
    CHECK(entropy(uniform) == doctest::Approx(8.0).epsilon(1e-12));

    CHECK_THROWS_AS(entropy(Plane(0, 0)), EmptyInput);
}

TEST_CASE("entropy is permutation invariant") {
    const Plane x = random_plane(50, 10, 10);
    Plane shuffled = x;
    std::swap(shuffled(0, 0), shuffled(9, 9));
    std::swap(shuffled(3, 4), shuffled(7, 2));
    CHECK(entropy(x) == doctest::Approx(entropy(shuffled)).epsilon(1e-12));
}

TEST_CASE("population standard deviation") {
    CHECK(std_dev(Plane::Constant(4, 4, 0.9)) == doctest::Approx(0.0).epsilon(1e-12));

    Plane half(2, 2);
    half << 0, 0, 1, 1;
    CHECK(std_dev(half) == doctest::Approx(0.5).epsilon(1e-12));

    Plane thirds(1, 3);
    thirds << 0.0, 0.5, 1.0;
    CHECK(std_dev(thirds) == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("correlation coefficient basics") {
    const Plane x = random_plane(60, 9, 9);
    CHECK(correlation_coefficient(x, x) == doctest::Approx(1.0).epsilon(1e-12));

    const Plane reflected = 2.0 * x.mean() - x;
    CHECK(correlation_coefficient(x, reflected) == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK(correlation_coefficient(x, (0.3 * x + 0.2).eval()) ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK(correlation_coefficient(x, reflected) ==
          doctest::Approx(correlation_coefficient(reflected, x)).epsilon(1e-12));

    CHECK_THROWS_AS(correlation_coefficient(x, Plane::Constant(9, 9, 0.5)), DegenerateInput);
    CHECK_THROWS_AS(correlation_coefficient(x, Plane::Zero(4, 4)), DimensionMismatch);
}

TEST_CASE("spatial frequency") {
    CHECK(spatial_frequency(Plane::Constant(5, 5, 0.7)) == doctest::Approx(0.0).epsilon(1e-12));

    Plane checker(2, 2);
    checker << 0, 1, 1, 0;
    // RF = CF = sqrt(2/4), so SF = 1.
    CHECK(spatial_frequency(checker) == doctest::Approx(1.0).epsilon(1e-12));

    Plane stripes(4, 6);
    for (Index i = 0; i < 4; ++i) stripes.row(i).setConstant(static_cast<double>(i) * 0.2);
    const Plane vertical_only = stripes;
    // Rows constant: no row-direction variation.
    Plane col_diffs = vertical_only.bottomRows(3) - vertical_only.topRows(3);
    const double cf = std::sqrt(col_diffs.square().sum() / 24.0);
    CHECK(spatial_frequency(vertical_only) == doctest::Approx(cf).epsilon(1e-12));

    const Plane x = random_plane(61, 7, 8);
    CHECK(spatial_frequency((x + 0.25).eval()) ==
          doctest::Approx(spatial_frequency(x)).epsilon(1e-12));

    CHECK_THROWS_AS(spatial_frequency(Plane::Constant(1, 5, 0.0)), TooSmall);
}

TEST_CASE("ssim identity, symmetry and disagreement") {
    const Plane x = random_plane(70, 16, 12);
    CHECK(ssim(x, x) == doctest::Approx(1.0).epsilon(1e-12));
    const Plane y = random_plane(71, 16, 12);
    CHECK(ssim(x, y) == doctest::Approx(ssim(y, x)).epsilon(1e-12));
    CHECK(ssim(x, (1.0 - x).eval()) < 1.0);
    CHECK_THROWS_AS(ssim(x, random_plane(1, 12, 16)), DimensionMismatch);
    CHECK_THROWS_AS(ssim(Plane::Zero(7, 7), Plane::Zero(7, 7)), TooSmall);
}

TEST_CASE("ssim matches the brute-force windowed oracle") {
    const Plane x = random_plane(72, 12, 10);
    const Plane y = random_plane(73, 12, 10);
    CHECK(ssim(x, y) == doctest::Approx(reference_ssim(x, y)).epsilon(1e-12));
}

TEST_CASE("uniform offset degrades only the luminance term") {
    const Plane x = Plane::Constant(9, 9, 0.5);
    const double eps = 0.01;
    const Plane y = x + eps;
    const double mu = 0.5;
    constexpr double c1 = 0.0001;
    const double expected = (2 * mu * (mu + eps) + c1) / (mu * mu + (mu + eps) * (mu + eps) + c1);
    CHECK(ssim(x, y) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ssim(x, y) == doctest::Approx(reference_ssim(x, y)).epsilon(1e-12));
}

TEST_CASE("blind assessment of the identity restoration") {
    const auto scene = testsupport::make_hazy_scene(80, 32, 32);
    const Plane luma = 0.299 * scene.rgb.r + 0.587 * scene.rgb.g + 0.114 * scene.rgb.b;
    const BlindAssessment out = blind_assessment(luma, luma);
    CHECK(out.e == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.sigma_sat == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.r_bar == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a clean contrast stretch reports r_bar near the gain") {
    // Smooth hill: gradients well above the visibility threshold, values far
    // from the clipping points, so a 1.5x stretch scales every gradient.
    Plane original(24, 24);
    for (Index i = 0; i < 24; ++i)
        for (Index j = 0; j < 24; ++j)
            original(i, j) = 0.5 + 0.18 * std::sin(0.5 * static_cast<double>(i)) *
                                       std::sin(0.45 * static_cast<double>(j));
    const Plane restored = (1.5 * (original - 0.5) + 0.5).eval();
    CHECK(restored.minCoeff() > 0.0);
    CHECK(restored.maxCoeff() < 1.0);
    const BlindAssessment out = blind_assessment(original, restored);
    CHECK(out.r_bar == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(out.sigma_sat == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.e >= 0.0);
}

TEST_CASE("newly saturated pixels are counted as a percentage") {
    Plane original = Plane::Constant(10, 10, 0.5);
    for (Index j = 0; j < 10; ++j) original(0, j) = static_cast<double>(j) / 9.0 * 0.8;
    Plane restored = original;
    restored(5, 5) = 1.0;
    restored(6, 6) = 0.0;
    restored(0, 0) = 0.0;  // already 0 in the original: not newly saturated
    const BlindAssessment out = blind_assessment(original, restored);
    CHECK(out.sigma_sat == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("constant images have no visible edges") {
    CHECK_THROWS_AS(blind_assessment(Plane::Constant(16, 16, 0.5), Plane::Constant(16, 16, 0.9)),
                    NoVisibleEdges);
}

TEST_CASE("sobel magnitude of a linear ramp is its slope") {
    Plane ramp(8, 8);
    for (Index i = 0; i < 8; ++i)
        for (Index j = 0; j < 8; ++j) ramp(i, j) = 0.1 * static_cast<double>(j);
    const Plane mag = sobel_magnitude(ramp);
    CHECK(mag(4, 4) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(mag(0, 0) == 0.0);  // border excluded
}

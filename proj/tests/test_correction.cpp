#include <doctest.h>

#include "depthaudit/correction.hpp"
#include "test_helpers.hpp"

using namespace depthaudit;

TEST_CASE("focal correction worked examples") {
    const FocalCorrection av = correct_focal_av(1781.78, 1916.17, 2016.0);
    CHECK(av.f_corrected == doctest::Approx(1781.78 * 1781.78 / 1916.17).epsilon(1e-12));
    CHECK(av.f_vga == doctest::Approx(525.97).epsilon(0.01 / 525.97));

    const FocalCorrection ar = correct_focal_ar(1916.17, 1781.78, 2880.0);
    CHECK(ar.f_vga == doctest::Approx(361.58).epsilon(0.01 / 361.58));

    CHECK_THROWS_AS(correct_focal_av(0.0, 1.0, 1.0), AuditError);
    CHECK_THROWS_AS(correct_focal_ar(1.0, 0.0, 1.0), AuditError);
    // The doubled error formula goes negative once f_ar > 1.5 * f_av.
    CHECK_THROWS_AS(correct_focal_ar(1600.0, 1000.0, 2880.0), AuditError);
}

TEST_CASE("zoom factors from the 2gen reference dimensions") {
    const SessionPair &pair = *find_fixture("11'' 2gen V1");
    const ZoomFactors z = zoom_factors(pair);
    CHECK(z.zx == doctest::Approx(0.950739).epsilon(1e-5));
    CHECK(z.zy == doctest::Approx(2316.0 / 2436.0).epsilon(1e-12));
}

TEST_CASE("identity zoom is byte-exact") {
    DepthMap d;
    std::mt19937 gen(3);
    std::uniform_real_distribution<float> dist(0.1f, 2.0f);
    for (int j = 0; j < d.height(); ++j)
        for (int i = 0; i < d.width(); ++i)
            if ((i + j) % 3 != 0) // leave a sprinkling of invalid pixels
                d.set(i, j, dist(gen));
    const DepthMap out = zoom_depth_map(d, testing::vga_intrinsics(), {1.0, 1.0});
    for (size_t i = 0; i < d.values().size(); ++i) {
        const float a = d.values()[i], b = out.values()[i];
        CHECK((std::isnan(a) ? std::isnan(b) : a == b));
    }
}

TEST_CASE("zoom moves values without rescaling them") {
    DepthMap d;
    for (int j = 0; j < d.height(); ++j)
        for (int i = 0; i < d.width(); ++i)
            d.set(i, j, 0.42f); // constant raster: any resampling must preserve it
    const Intrinsics k = testing::vga_intrinsics();
    const DepthMap out = zoom_depth_map(d, k, {0.9507, 0.9507});
    CHECK(out.at(320, 240) == doctest::Approx(0.42).epsilon(1e-6));
    CHECK(out.at(100, 100) == doctest::Approx(0.42).epsilon(1e-6));
    // Shrinking (z < 1) reads outside the source near the border.
    CHECK(!out.valid(0, 0));
    CHECK_THROWS_AS(zoom_depth_map(d, k, {0.4, 1.0}), AuditError);
    CHECK_THROWS_AS(zoom_depth_map(d, k, {1.0, 2.5}), AuditError);
}

TEST_CASE("zoom against its reciprocal restores a smooth raster") {
    // Plane-like smooth depth; bilinear resampling is near-exact on it.
    DepthMap d;
    for (int j = 0; j < d.height(); ++j)
        for (int i = 0; i < d.width(); ++i)
            d.set(i, j, static_cast<float>(0.2 + 1e-4 * i + 5e-5 * j));
    const Intrinsics k = testing::vga_intrinsics();
    const double z = 0.950739;
    const DepthMap once = zoom_depth_map(d, k, {z, z});
    const DepthMap back = zoom_depth_map(once, k, {1.0 / z, 1.0 / z});
    int compared = 0;
    for (int j = 40; j < 440; ++j)
        for (int i = 40; i < 600; ++i) {
            REQUIRE(back.valid(i, j));
            CHECK(std::abs(back.at(i, j) - d.at(i, j)) < 1e-5);
            ++compared;
        }
    CHECK(compared > 100000);
}

TEST_CASE("arkit frame normalization is an involution") {
    DepthMap d;
    std::mt19937 gen(11);
    std::uniform_real_distribution<float> dist(0.1f, 3.0f);
    for (int j = 0; j < d.height(); ++j)
        for (int i = 0; i < d.width(); ++i)
            if (i % 7 != 0)
                d.set(i, j, dist(gen));
    const Intrinsics k(600.0, 310.0, 250.0, 640.0, 480.0);
    auto [flipped, kf] = normalize_arkit_frame(d, k);
    CHECK(kf.cx == doctest::Approx(639.0 - 310.0).epsilon(1e-15));
    CHECK(flipped.at(0, 10) == d.at(639, 10));
    auto [restored, kr] = normalize_arkit_frame(flipped, kf);
    CHECK(kr.cx == k.cx);
    for (size_t i = 0; i < d.values().size(); ++i) {
        const float a = d.values()[i], b = restored.values()[i];
        CHECK((std::isnan(a) ? std::isnan(b) : a == b));
    }
}

#include <doctest.h>

#include "depthaudit/camera.hpp"
#include "test_helpers.hpp"

using namespace depthaudit;

TEST_CASE("project and unproject are mutually inverse") {
    const Intrinsics k = testing::vga_intrinsics();
    DepthMap d;
    d.set(100, 200, 0.37f);
    const Eigen::Vector3d p = unproject(d, k, 100, 200);
    CHECK(p.z() == doctest::Approx(0.37f).epsilon(1e-12)); // exactly the stored depth
    const Eigen::Vector2d uv = project(p, k);
    CHECK(uv.x() == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(uv.y() == doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("project rejects non-positive depth") {
    const Intrinsics k = testing::vga_intrinsics();
    CHECK_THROWS_AS(project({0.0, 0.0, 0.0}, k), AuditError);
    CHECK_THROWS_AS(project({0.0, 0.0, -1.0}, k), AuditError);
    try {
        project({0.1, 0.1, -0.5}, k);
    } catch (const AuditError &e) {
        CHECK(e.code() == ErrorCode::DegenerateProjection);
    }
}

TEST_CASE("unproject on an invalid pixel throws InvalidDepthSample") {
    const Intrinsics k = testing::vga_intrinsics();
    DepthMap d; // all NaN
    CHECK_THROWS_AS(unproject(d, k, 10, 10), AuditError);
    CHECK_THROWS_AS(unproject(d, k, -1, 0), AuditError);
}

TEST_CASE("unproject_all skips invalid pixels and preserves order") {
    const Intrinsics k = testing::vga_intrinsics();
    DepthMap d;
    d.set(0, 0, 1.0f);
    d.set(5, 0, 2.0f);
    d.set(3, 7, 3.0f);
    const auto cloud = unproject_all(d, k);
    REQUIRE(cloud.size() == 3);
    CHECK(cloud[0].z() == doctest::Approx(1.0));
    CHECK(cloud[1].z() == doctest::Approx(2.0));
    CHECK(cloud[2].z() == doctest::Approx(3.0));
}

TEST_CASE("rescale_intrinsics scales focal and principal point proportionally") {
    const Intrinsics k(1781.78, 1009.89, 759.69, 2016.0, 1512.0);
    const Intrinsics vga = rescale_intrinsics(k, 640.0, 480.0);
    CHECK(vga.f == doctest::Approx(1781.78 * 640.0 / 2016.0));
    CHECK(vga.cx == doctest::Approx(1009.89 * 640.0 / 2016.0));
    CHECK(vga.ref_w == 640.0);
    CHECK(vga.ref_h == 480.0);
    // Non-proportional target dimensions are rejected.
    CHECK_THROWS_AS(rescale_intrinsics(k, 640.0, 500.0), AuditError);
}

TEST_CASE("sample_bilinear lattice points are bit-exact") {
    DepthMap d;
    d.set(10, 20, 0.123456789f);
    CHECK(sample_bilinear(d, 10.0, 20.0) == static_cast<double>(d.at(10, 20)));
}

TEST_CASE("sample_bilinear interpolates linearly") {
    DepthMap d;
    d.set(0, 0, 1.0f);
    d.set(1, 0, 2.0f);
    d.set(0, 1, 3.0f);
    d.set(1, 1, 4.0f);
    CHECK(sample_bilinear(d, 0.5, 0.0) == doctest::Approx(1.5));
    CHECK(sample_bilinear(d, 0.0, 0.5) == doctest::Approx(2.0));
    CHECK(sample_bilinear(d, 0.5, 0.5) == doctest::Approx(2.5));
    CHECK(sample_bilinear(d, 0.25, 0.75) == doctest::Approx(1.0 * 0.75 * 0.25 + 2.0 * 0.25 * 0.25 +
                                                            3.0 * 0.75 * 0.75 + 4.0 * 0.25 * 0.75));
}

TEST_CASE("sample_bilinear poisons on any invalid neighbor, throws out of bounds") {
    DepthMap d;
    d.set(0, 0, 1.0f);
    d.set(1, 0, 2.0f);
    d.set(0, 1, 3.0f); // (1,1) stays NaN
    CHECK(std::isnan(sample_bilinear(d, 0.5, 0.5)));
    CHECK(sample_bilinear(d, 0.5, 0.0) == doctest::Approx(1.5)); // unaffected row
    CHECK_THROWS_AS(sample_bilinear(d, -0.1, 0.0), AuditError);
    CHECK_THROWS_AS(sample_bilinear(d, 639.5, 0.0), AuditError); // x1 would be 640
    CHECK_THROWS_AS(sample_bilinear(d, 0.0, 479.01), AuditError);
    CHECK(std::isnan(sample_bilinear(d, 639.0, 479.0))); // corner lattice point is in bounds
}

TEST_CASE("intrinsics validate rejects nonsense") {
    CHECK_THROWS_AS(Intrinsics(-1.0, 320, 240, 640, 480).validate(), AuditError);
    CHECK_THROWS_AS(Intrinsics(500.0, 320, 240, 0.0, 480).validate(), AuditError);
    CHECK_NOTHROW(testing::vga_intrinsics().validate());
}

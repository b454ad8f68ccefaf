#include <doctest.h>

#include <random>

#include "depthaudit/pose.hpp"
#include "test_helpers.hpp"

using namespace depthaudit;

TEST_CASE("axis-angle round trip across magnitudes") {
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double scale : {1e-14, 1e-8, 0.5, 1.5, 3.0}) {
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::Vector3d omega(dist(gen), dist(gen), dist(gen));
            if (omega.norm() > 0.0)
                omega *= scale / omega.norm();
            const Eigen::Matrix3d R = rotation_from_axis_angle(omega);
            CHECK((R * R.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
            CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-12));
            const Eigen::Vector3d back = axis_angle_from_rotation(R);
            CHECK((rotation_from_axis_angle(back) - R).norm() < 1e-9);
        }
    }
    // theta near pi, where the quaternion-free extraction is numerically nasty
    const Eigen::Vector3d near_pi = Eigen::Vector3d(1.0, -0.3, 0.2).normalized() * (M_PI - 1e-7);
    const Eigen::Matrix3d R = rotation_from_axis_angle(near_pi);
    CHECK((rotation_from_axis_angle(axis_angle_from_rotation(R)) - R).norm() < 1e-6);
    CHECK(rotation_from_axis_angle(Eigen::Vector3d::Zero()) == Eigen::Matrix3d::Identity());
}

TEST_CASE("rotation point jacobian matches central differences") {
    std::mt19937 gen(2);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Vector3d omega(dist(gen), dist(gen), dist(gen));
        const Eigen::Vector3d x(dist(gen), dist(gen), dist(gen));
        const Eigen::Matrix3d J = rotation_point_jacobian(omega, x);
        Eigen::Matrix3d J_fd;
        const double h = 1e-6;
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector3d delta = Eigen::Vector3d::Zero();
            delta[k] = h;
            J_fd.col(k) = (rotation_from_axis_angle(omega + delta) * x -
                           rotation_from_axis_angle(omega - delta) * x) /
                          (2.0 * h);
        }
        worst = std::max(worst, (J - J_fd).norm() / std::max(1.0, J.norm()));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("homography estimation needs enough well-placed points") {
    std::vector<Correspondence> corrs(3);
    CHECK_THROWS_AS(estimate_homography(corrs), AuditError);

    // Collinear board points span a rank-deficient system.
    std::vector<Correspondence> line(6);
    for (int i = 0; i < 6; ++i) {
        line[i].board_point = {0.01 * i, 0.0, 0.0};
        line[i].pixel = {0.01 * i, 0.0};
    }
    try {
        estimate_homography(line);
        FAIL_CHECK("expected DegenerateConfiguration");
    } catch (const AuditError &e) {
        CHECK(e.code() == ErrorCode::DegenerateConfiguration);
    }
}

TEST_CASE("homography has unit frobenius norm and maps the board") {
    const Intrinsics k = testing::vga_intrinsics();
    std::mt19937 gen(5);
    const Pose pose = testing::random_viewing_pose(gen);
    const auto corrs = normalize_points(testing::grid_corrs(pose, k), k);
    const Eigen::Matrix3d H = estimate_homography(corrs);
    CHECK(H.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto &c : corrs) {
        const Eigen::Vector3d mapped = H * Eigen::Vector3d(c.board_point.x(), c.board_point.y(), 1.0);
        CHECK(mapped.x() / mapped.z() == doctest::Approx(c.pixel.x()).epsilon(1e-9));
        CHECK(mapped.y() / mapped.z() == doctest::Approx(c.pixel.y()).epsilon(1e-9));
    }
}

TEST_CASE("pnp oracle: noiseless random scenes recover the exact pose") {
    const Intrinsics k = testing::vga_intrinsics();
    std::mt19937 gen(123);
    double worst_rot = 0.0, worst_trans = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Pose truth = testing::random_viewing_pose(gen);
        const auto corrs = testing::grid_corrs(truth, k);
        const PnpResult result = solve_pnp(corrs, k);
        const Eigen::Matrix3d dR = result.pose.R.transpose() * truth.R;
        const double rot_err = axis_angle_from_rotation(dR).norm();
        const double trans_err = (result.pose.t - truth.t).norm();
        worst_rot = std::max(worst_rot, rot_err);
        worst_trans = std::max(worst_trans, trans_err);
        CHECK(result.rms_px < 1e-8);
    }
    CHECK(worst_rot < 1e-7);
    CHECK(worst_trans < 1e-9);
}

TEST_CASE("lm refinement shrinks noisy reprojection error") {
    const Intrinsics k = testing::vga_intrinsics();
    std::mt19937 gen(77);
    std::normal_distribution<double> noise(0.0, 0.5);
    const Pose truth = testing::random_viewing_pose(gen);
    auto corrs = testing::grid_corrs(truth, k);
    for (auto &c : corrs)
        c.pixel += Eigen::Vector2d(noise(gen), noise(gen));
    const PnpResult result = solve_pnp(corrs, k);
    CHECK(result.rms_px < 1.0); // ~0.5 px noise, the fit should land below it
    CHECK(result.rms_px > 1e-4);
    const double rot_err =
        axis_angle_from_rotation(result.pose.R.transpose() * truth.R).norm();
    CHECK(rot_err < 0.02);
}

TEST_CASE("solve_pnp with too few points") {
    const Intrinsics k = testing::vga_intrinsics();
    std::mt19937 gen(9);
    const Pose pose = testing::random_viewing_pose(gen);
    auto corrs = testing::grid_corrs(pose, k);
    corrs.resize(3);
    CHECK_THROWS_AS(solve_pnp(corrs, k), AuditError);
}

TEST_CASE("pose camera center is consistent with apply") {
    std::mt19937 gen(4);
    const Pose pose = testing::random_viewing_pose(gen);
    CHECK(pose.apply(pose.camera_center()).norm() < 1e-12);
}

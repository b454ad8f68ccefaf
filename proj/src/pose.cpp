#include "depthaudit/pose.hpp"

#include <cmath>

namespace depthaudit {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d &v) {
    Eigen::Matrix3d s;
    s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return s;
}

} // namespace

Eigen::Matrix3d rotation_from_axis_angle(const Eigen::Vector3d &omega) {
    const double theta = omega.norm();
    if (theta < 1e-12) {
        // Second-order Taylor expansion keeps the result orthonormal to
        // machine precision for tiny angles.
        const Eigen::Matrix3d w = skew(omega);
        return Eigen::Matrix3d::Identity() + w + 0.5 * w * w;
    }
    const Eigen::Vector3d axis = omega / theta;
    return Eigen::AngleAxisd(theta, axis).toRotationMatrix();
}

Eigen::Vector3d axis_angle_from_rotation(const Eigen::Matrix3d &R) {
    Eigen::AngleAxisd aa(R);
    return aa.angle() * aa.axis();
}

Eigen::Matrix3d rotation_point_jacobian(const Eigen::Vector3d &omega, const Eigen::Vector3d &x) {
    const double theta2 = omega.squaredNorm();
    const Eigen::Matrix3d R = rotation_from_axis_angle(omega);
    if (theta2 < 1e-16)
        return -skew(R * x);
    // d(R x)/d(omega_k) = [ (omega_k [omega]x + [omega x (I - R) e_k]x) / theta^2 ] R x
    Eigen::Matrix3d jac;
    const Eigen::Matrix3d wx = skew(omega);
    const Eigen::Matrix3d i_minus_r = Eigen::Matrix3d::Identity() - R;
    for (int k = 0; k < 3; ++k) {
        const Eigen::Vector3d ek = Eigen::Vector3d::Unit(k);
        const Eigen::Matrix3d dR =
            ((omega(k) * wx + skew(omega.cross(i_minus_r * ek))) / theta2) * R;
        jac.col(k) = dR * x;
    }
    return jac;
}

std::vector<Correspondence> normalize_points(const std::vector<Correspondence> &corrs,
                                             const Intrinsics &k) {
    std::vector<Correspondence> out = corrs;
    for (auto &c : out) {
        const double yn = (c.pixel.y() - k.cy) / (k.f * k.aspect);
        const double xn = (c.pixel.x() - k.cx - k.skew * yn) / k.f;
        c.pixel = {xn, yn};
    }
    return out;
}

Eigen::Matrix3d estimate_homography(const std::vector<Correspondence> &corrs) {
    const size_t n = corrs.size();
    if (n < 4)
        throw_error(ErrorCode::InsufficientPoints, "homography estimation needs >= 4 points");

    // Hartley normalization of both point sets.
    Eigen::Vector2d mean_b = Eigen::Vector2d::Zero(), mean_p = Eigen::Vector2d::Zero();
    for (const auto &c : corrs) {
        mean_b += c.board_point.head<2>();
        mean_p += c.pixel;
    }
    mean_b /= static_cast<double>(n);
    mean_p /= static_cast<double>(n);
    double scale_b = 0.0, scale_p = 0.0;
    for (const auto &c : corrs) {
        scale_b += (c.board_point.head<2>() - mean_b).norm();
        scale_p += (c.pixel - mean_p).norm();
    }
    scale_b = (scale_b > 0.0) ? std::sqrt(2.0) * n / scale_b : 1.0;
    scale_p = (scale_p > 0.0) ? std::sqrt(2.0) * n / scale_p : 1.0;

    Eigen::Matrix3d t_b = Eigen::Matrix3d::Identity(), t_p = Eigen::Matrix3d::Identity();
    t_b(0, 0) = t_b(1, 1) = scale_b;
    t_b.block<2, 1>(0, 2) = -scale_b * mean_b;
    t_p(0, 0) = t_p(1, 1) = scale_p;
    t_p.block<2, 1>(0, 2) = -scale_p * mean_p;

    Eigen::MatrixXd a(2 * n, 9);
    for (size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d b = t_b * Eigen::Vector3d(corrs[i].board_point.x(),
                                                        corrs[i].board_point.y(), 1.0);
        const Eigen::Vector3d p = t_p * Eigen::Vector3d(corrs[i].pixel.x(), corrs[i].pixel.y(), 1.0);
        a.row(2 * i) << b.x(), b.y(), b.z(), 0, 0, 0, -p.x() * b.x(), -p.x() * b.y(), -p.x() * b.z();
        a.row(2 * i + 1) << 0, 0, 0, b.x(), b.y(), b.z(), -p.y() * b.x(), -p.y() * b.y(),
            -p.y() * b.z();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    // Two (near-)zero singular values mean the system does not pin down a
    // unique homography (e.g. collinear board points).
    if (sv(0) <= 0.0 || sv(7) / sv(0) < 1e-9)
        throw_error(ErrorCode::DegenerateConfiguration, "rank-deficient homography system");

    Eigen::Matrix3d h_norm;
    const Eigen::VectorXd h = svd.matrixV().col(8);
    h_norm << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    Eigen::Matrix3d result = t_p.inverse() * h_norm * t_b;
    result /= result.norm();
    return result;
}

Pose pose_from_homography(const Eigen::Matrix3d &H) {
    const Eigen::Vector3d h1 = H.col(0), h2 = H.col(1), h3 = H.col(2);
    const double norm_h1 = h1.norm();
    if (!(norm_h1 > 1e-12))
        throw_error(ErrorCode::DegenerateConfiguration, "first homography column vanishes");
    double lambda = 1.0 / norm_h1;
    Eigen::Vector3d t = lambda * h3;
    if (t.z() < 0.0) {
        lambda = -lambda;
        t = -t;
    }
    if (!(t.z() > 0.0))
        throw_error(ErrorCode::DegenerateConfiguration, "board not in front of the camera");

    const Eigen::Vector3d r1 = lambda * h1;
    const Eigen::Vector3d r2 = lambda * h2;
    Eigen::Matrix3d r_approx;
    r_approx.col(0) = r1;
    r_approx.col(1) = r2;
    r_approx.col(2) = r1.cross(r2);

    // Nearest rotation via polar decomposition.
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(r_approx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0)
        r = svd.matrixU() * Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal() *
            svd.matrixV().transpose();

    Pose pose;
    pose.R = r;
    pose.t = t;
    return pose;
}

namespace {

constexpr int kMaxIterations = 100;
constexpr int kMaxConsecutiveRejects = 10;
constexpr double kRelCostTol = 1e-12;
constexpr double kGradientTol = 1e-10;

double evaluate(const std::vector<Correspondence> &corrs, const Eigen::Vector3d &omega,
                const Eigen::Vector3d &t, Eigen::Matrix<double, 6, 6> *jtj,
                Eigen::Matrix<double, 6, 1> *jtr) {
    const Eigen::Matrix3d R = rotation_from_axis_angle(omega);
    if (jtj) {
        jtj->setZero();
        jtr->setZero();
    }
    double cost = 0.0;
    for (const auto &c : corrs) {
        const Eigen::Vector3d p = R * c.board_point + t;
        if (!(p.z() > 0.0) || !p.allFinite())
            throw_error(ErrorCode::NumericalFailure, "point behind camera during refinement");
        const Eigen::Vector2d r(p.x() / p.z() - c.pixel.x(), p.y() / p.z() - c.pixel.y());
        cost += r.squaredNorm();
        if (jtj) {
            Eigen::Matrix<double, 2, 3> dpi;
            dpi << 1.0 / p.z(), 0.0, -p.x() / (p.z() * p.z()), 0.0, 1.0 / p.z(),
                -p.y() / (p.z() * p.z());
            Eigen::Matrix<double, 2, 6> jac;
            jac.block<2, 3>(0, 0) = dpi * rotation_point_jacobian(omega, c.board_point);
            jac.block<2, 3>(0, 3) = dpi;
            *jtj += jac.transpose() * jac;
            *jtr += jac.transpose() * r;
        }
    }
    if (!std::isfinite(cost))
        throw_error(ErrorCode::NumericalFailure, "non-finite residuals during refinement");
    return cost;
}

// Axis-angle kept in the minimal chart; past pi the same rotation has a
// shorter representative.
Eigen::Vector3d renormalize_axis_angle(const Eigen::Vector3d &omega) {
    const double theta = omega.norm();
    if (theta > M_PI)
        return omega * (1.0 - 2.0 * M_PI / theta);
    return omega;
}

} // namespace

RefineResult refine_pose_lm(const std::vector<Correspondence> &corrs, const Pose &init) {
    if (corrs.size() < 4)
        throw_error(ErrorCode::InsufficientPoints, "pose refinement needs >= 4 points");

    Eigen::Vector3d omega = axis_angle_from_rotation(init.R);
    Eigen::Vector3d t = init.t;

    Eigen::Matrix<double, 6, 6> jtj;
    Eigen::Matrix<double, 6, 1> jtr;
    double cost = evaluate(corrs, omega, t, &jtj, &jtr);

    double lambda = 1e-3 * jtj.diagonal().mean();
    int iterations = 0;
    int rejects = 0;
    for (; iterations < kMaxIterations; ++iterations) {
        if (jtr.lpNorm<Eigen::Infinity>() < kGradientTol)
            break;
        const Eigen::Matrix<double, 6, 6> damped =
            jtj + lambda * Eigen::Matrix<double, 6, 6>::Identity();
        const Eigen::Matrix<double, 6, 1> delta = damped.ldlt().solve(-jtr);
        if (!delta.allFinite())
            throw_error(ErrorCode::NumericalFailure, "non-finite LM step");

        const Eigen::Vector3d omega_new = renormalize_axis_angle(omega + delta.head<3>());
        const Eigen::Vector3d t_new = t + delta.tail<3>();
        const double cost_new = evaluate(corrs, omega_new, t_new, nullptr, nullptr);

        if (cost_new <= cost) {
            const double rel_change = (cost - cost_new) / std::max(cost, 1e-300);
            omega = omega_new;
            t = t_new;
            cost = evaluate(corrs, omega, t, &jtj, &jtr);
            lambda *= 0.1;
            rejects = 0;
            if (rel_change < kRelCostTol)
                break;
        } else {
            lambda *= 10.0;
            if (++rejects >= kMaxConsecutiveRejects) {
                // A stalled solver at a stationary point is convergence, not
                // divergence.
                if (jtr.lpNorm<Eigen::Infinity>() < 1e-6 * std::sqrt(cost) + kGradientTol)
                    break;
                throw_error(ErrorCode::NoConvergence,
                            "cost increased for 10 consecutive damped steps");
            }
        }
    }

    RefineResult result;
    result.pose.R = rotation_from_axis_angle(omega);
    result.pose.t = t;
    result.rms = std::sqrt(cost / static_cast<double>(corrs.size()));
    result.iterations = iterations;
    return result;
}

PnpResult solve_pnp(const std::vector<Correspondence> &corrs, const Intrinsics &k) {
    const std::vector<Correspondence> normalized = normalize_points(corrs, k);
    const Eigen::Matrix3d h = estimate_homography(normalized);
    const Pose init = pose_from_homography(h);
    const RefineResult refined = refine_pose_lm(normalized, init);
    return {refined.pose, refined.rms * k.f};
}

} // namespace depthaudit

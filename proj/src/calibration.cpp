#include "depthaudit/calibration.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>

namespace depthaudit {

std::vector<CalibrationView> select_views(const std::vector<CalibrationView> &views,
                                          double voxel_size, int min_corners) {
    if (!(voxel_size > 0.0))
        throw_error(ErrorCode::DomainError, "voxel size must be positive");
    std::vector<CalibrationView> kept;
    std::map<std::tuple<int64_t, int64_t, int64_t>, bool> occupied;
    for (const auto &view : views) {
        if (view.correspondences.size() < static_cast<size_t>(min_corners))
            continue;
        const Eigen::Vector3d c = view.camera_center_estimate;
        const auto voxel = std::make_tuple(static_cast<int64_t>(std::floor(c.x() / voxel_size)),
                                           static_cast<int64_t>(std::floor(c.y() / voxel_size)),
                                           static_cast<int64_t>(std::floor(c.z() / voxel_size)));
        if (occupied.count(voxel))
            continue;
        occupied[voxel] = true;
        CalibrationView v = view;
        v.accepted = true;
        kept.push_back(std::move(v));
    }
    if (kept.empty())
        throw_error(ErrorCode::NoUsableViews, "no views survived selection");
    return kept;
}

namespace {

struct ViewState {
    Eigen::Vector3d omega;
    Eigen::Vector3d t;
};

// Dense normal equations for [f, pose_1..pose_N]; returns the cost and fills
// JtJ / Jtr when requested. Residuals are in pixels.
double evaluate_all(const std::vector<CalibrationView> &views, const std::vector<ViewState> &states,
                    double f, double cx, double cy, Eigen::MatrixXd *jtj, Eigen::VectorXd *jtr,
                    size_t *residual_count) {
    const size_t num_params = 1 + 6 * states.size();
    if (jtj) {
        jtj->setZero(num_params, num_params);
        jtr->setZero(num_params);
    }
    double cost = 0.0;
    size_t count = 0;
    for (size_t vi = 0; vi < views.size(); ++vi) {
        const Eigen::Matrix3d R = rotation_from_axis_angle(states[vi].omega);
        for (const auto &c : views[vi].correspondences) {
            const Eigen::Vector3d p = R * c.board_point + states[vi].t;
            if (!(p.z() > 0.0) || !p.allFinite())
                throw_error(ErrorCode::NumericalFailure, "point behind camera during calibration");
            const double xn = p.x() / p.z();
            const double yn = p.y() / p.z();
            const Eigen::Vector2d r(f * xn + cx - c.pixel.x(), f * yn + cy - c.pixel.y());
            cost += r.squaredNorm();
            ++count;
            if (!jtj)
                continue;
            Eigen::Matrix<double, 2, 3> dpi;
            dpi << f / p.z(), 0.0, -f * p.x() / (p.z() * p.z()), 0.0, f / p.z(),
                -f * p.y() / (p.z() * p.z());
            Eigen::Matrix<double, 2, 7> jac; // [f | omega | t]
            jac.col(0) = Eigen::Vector2d(xn, yn);
            jac.block<2, 3>(0, 1) = dpi * rotation_point_jacobian(states[vi].omega, c.board_point);
            jac.block<2, 3>(0, 4) = dpi;

            const size_t off = 1 + 6 * vi;
            (*jtj)(0, 0) += jac.col(0).squaredNorm();
            const Eigen::Matrix<double, 6, 6> block =
                jac.block<2, 6>(0, 1).transpose() * jac.block<2, 6>(0, 1);
            jtj->block<6, 6>(off, off) += block;
            const Eigen::Matrix<double, 1, 6> cross =
                jac.col(0).transpose() * jac.block<2, 6>(0, 1);
            jtj->block<1, 6>(0, off) += cross;
            jtj->block<6, 1>(off, 0) += cross.transpose();
            (*jtr)(0) += jac.col(0).dot(r);
            jtr->segment<6>(off) += jac.block<2, 6>(0, 1).transpose() * r;
        }
    }
    if (!std::isfinite(cost))
        throw_error(ErrorCode::NumericalFailure, "non-finite residuals during calibration");
    if (residual_count)
        *residual_count = count;
    return cost;
}

} // namespace

CalibrationResult calibrate_focal(const std::vector<CalibrationView> &views,
                                  const Intrinsics &k_init, const CalibrationOptions &options) {
    if (views.size() < static_cast<size_t>(options.min_views))
        throw_error(ErrorCode::NoUsableViews, "calibration needs at least 3 views");

    std::vector<ViewState> states(views.size());
    for (size_t i = 0; i < views.size(); ++i) {
        const PnpResult pnp = solve_pnp(views[i].correspondences, k_init);
        states[i] = {axis_angle_from_rotation(pnp.pose.R), pnp.pose.t};
    }

    double f = k_init.f;
    const double cx = k_init.cx, cy = k_init.cy;

    Eigen::MatrixXd jtj;
    Eigen::VectorXd jtr;
    size_t residual_count = 0;
    double cost = evaluate_all(views, states, f, cx, cy, &jtj, &jtr, &residual_count);

    double lambda = 1e-3 * jtj.diagonal().mean();
    const size_t num_params = 1 + 6 * states.size();
    int iterations = 0;
    int rejects = 0;
    for (; iterations < 100; ++iterations) {
        if (jtr.lpNorm<Eigen::Infinity>() < 1e-10)
            break;
        Eigen::MatrixXd damped = jtj;
        damped.diagonal().array() += lambda;
        const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
        if (!delta.allFinite())
            throw_error(ErrorCode::NumericalFailure, "non-finite calibration step");

        const double f_new = f + delta(0);
        std::vector<ViewState> states_new = states;
        for (size_t i = 0; i < states.size(); ++i) {
            states_new[i].omega += delta.segment<3>(1 + 6 * i);
            states_new[i].t += delta.segment<3>(4 + 6 * i);
        }
        double cost_new;
        try {
            cost_new = (f_new > 0.0)
                           ? evaluate_all(views, states_new, f_new, cx, cy, nullptr, nullptr, nullptr)
                           : std::numeric_limits<double>::infinity();
        } catch (const AuditError &) {
            cost_new = std::numeric_limits<double>::infinity();
        }

        if (cost_new <= cost) {
            const double rel_change = (cost - cost_new) / std::max(cost, 1e-300);
            f = f_new;
            states = std::move(states_new);
            cost = evaluate_all(views, states, f, cx, cy, &jtj, &jtr, nullptr);
            lambda *= 0.1;
            rejects = 0;
            if (rel_change < 1e-12)
                break;
        } else {
            lambda *= 10.0;
            if (++rejects >= 10) {
                // A stall at a negligible residual is a solved problem: near
                // the optimum of exact data the cost sits at the rounding
                // floor and every damped step gets rejected.
                const double rms = std::sqrt(cost / static_cast<double>(residual_count));
                const double grad_scale =
                    std::sqrt(jtj.diagonal().maxCoeff()) * std::sqrt(cost);
                if (rms < 1e-6 || jtr.lpNorm<Eigen::Infinity>() < 1e-6 * grad_scale + 1e-10)
                    break;
                throw_error(ErrorCode::NoConvergence,
                            "calibration cost increased for 10 consecutive damped steps");
            }
        }
    }

    CalibrationResult result;
    result.f = f;
    result.rms_reproj_px = std::sqrt(cost / static_cast<double>(residual_count));
    result.views_used = static_cast<int>(views.size());
    result.iterations = iterations;
    for (const auto &s : states) {
        Pose pose;
        pose.R = rotation_from_axis_angle(s.omega);
        pose.t = s.t;
        result.per_view_poses.push_back(pose);
    }

    // Condition estimate on the undamped normal equations.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jtj);
    const double ev_min = eig.eigenvalues()(0);
    const double ev_max = eig.eigenvalues()(num_params - 1);
    result.ill_conditioned = !(ev_min > 0.0) || (ev_max / ev_min) > options.condition_warn;
    return result;
}

CalibrationResult run_calibration(const std::vector<std::vector<Correspondence>> &views,
                                  const Intrinsics &k_init, const CalibrationOptions &options) {
    std::vector<CalibrationView> candidates;
    int rejected_corners = 0;
    for (const auto &corrs : views) {
        CalibrationView v;
        v.correspondences = corrs;
        if (corrs.size() < static_cast<size_t>(options.min_corners)) {
            ++rejected_corners;
            continue;
        }
        v.camera_center_estimate = solve_pnp(corrs, k_init).pose.camera_center();
        candidates.push_back(std::move(v));
    }
    const std::vector<CalibrationView> kept =
        select_views(candidates, options.voxel_size, options.min_corners);
    CalibrationResult result = calibrate_focal(kept, k_init, options);
    result.views_rejected_corners = rejected_corners;
    result.views_rejected_voxel = static_cast<int>(candidates.size() - kept.size());
    return result;
}

double focal_discrepancy(double f_factory, double f_calibrated) {
    if (!(f_factory > 0.0) || !(f_calibrated > 0.0))
        throw_error(ErrorCode::DomainError, "focal lengths must be positive");
    return 100.0 * std::abs(f_factory - f_calibrated) / f_factory;
}

} // namespace depthaudit

#include "depthaudit/synthetic.hpp"

#include <cmath>

#include <json.hpp>

namespace depthaudit {

using json = nlohmann::ordered_json;

BoardLayout SceneSpec::board() const {
    BoardLayout layout;
    for (int j = 0; j < board_rows; ++j)
        for (int i = 0; i < board_cols; ++i)
            layout.corners[j * board_cols + i] = {i * square_size, j * square_size};
    return layout;
}

void SceneSpec::validate() const {
    if (!(square_size > 0.0))
        throw_error(ErrorCode::InvariantViolation, "square size must be positive");
    if (board_cols < 2 || board_rows < 2)
        throw_error(ErrorCode::InvariantViolation, "board needs at least 2x2 corners");
    true_intrinsics.validate();
    if (bug != InjectedBug::None && !(bug_factor > 0.5 && bug_factor < 2.0))
        throw_error(ErrorCode::InvariantViolation, "bug factor outside sanity bounds (0.5, 2)");
    if (corner_noise_sigma < 0.0 || depth_noise_sigma < 0.0)
        throw_error(ErrorCode::InvariantViolation, "noise sigmas must be non-negative");
}

namespace {

// Per-view noise streams live at (seed, view); pose sampling streams at
// (seed, 1e6 + view) so adding noise never shifts the pose sequence.
constexpr uint64_t kPoseStreamOffset = 1000000;

DepthMap render_plane_depth(const SceneSpec &spec, const Pose &pose, SplitMix64 *noise) {
    const Intrinsics &k = spec.true_intrinsics;
    const Eigen::Vector3d normal = pose.R.col(2); // board z-axis in camera frame
    const Eigen::Vector3d p0 = pose.t;
    const double n_dot_p0 = normal.dot(p0);

    DepthMap d;
    for (int j = 0; j < d.height(); ++j) {
        for (int i = 0; i < d.width(); ++i) {
            const Eigen::Vector3d dir((i - k.cx) / k.f, (j - k.cy) / (k.f * k.aspect), 1.0);
            const double denom = normal.dot(dir);
            if (std::abs(denom) < 1e-12)
                continue;
            double z = n_dot_p0 / denom;
            if (!(z > 0.0))
                continue; // plane behind the camera at this ray
            if (noise)
                z += spec.depth_noise_sigma * noise->next_gaussian();
            d.set(i, j, static_cast<float>(z));
        }
    }
    return d;
}

DepthMap apply_zoom_stretch(const DepthMap &clean, const Intrinsics &k, double factor) {
    DepthMap out;
    for (int j = 0; j < out.height(); ++j) {
        for (int i = 0; i < out.width(); ++i) {
            const double u = k.cx + (i - k.cx) / factor;
            const double v = k.cy + (j - k.cy) / factor;
            if (u < 0.0 || v < 0.0 || u > out.width() - 1 || v > out.height() - 1)
                continue;
            out.set(i, j, static_cast<float>(sample_bilinear(clean, u, v)));
        }
    }
    return out;
}

PpmImage render_checker_rgb(const SceneSpec &spec, const Pose &pose) {
    const Intrinsics &k = spec.true_intrinsics;
    const Eigen::Vector3d normal = pose.R.col(2);
    const double n_dot_p0 = normal.dot(pose.t);
    const double board_w = (spec.board_cols - 1) * spec.square_size;
    const double board_h = (spec.board_rows - 1) * spec.square_size;

    PpmImage img(DepthMap::kWidth, DepthMap::kHeight);
    for (int j = 0; j < img.height; ++j) {
        for (int i = 0; i < img.width; ++i) {
            const Eigen::Vector3d dir((i - k.cx) / k.f, (j - k.cy) / (k.f * k.aspect), 1.0);
            const double denom = normal.dot(dir);
            uint8_t shade = 128;
            if (std::abs(denom) > 1e-12 && n_dot_p0 / denom > 0.0) {
                const Eigen::Vector3d pc = (n_dot_p0 / denom) * dir;
                const Eigen::Vector3d pb = pose.R.transpose() * (pc - pose.t);
                const int parity =
                    (static_cast<int>(std::floor(pb.x() / spec.square_size)) +
                     static_cast<int>(std::floor(pb.y() / spec.square_size))) &
                    1;
                const bool on_board = pb.x() >= -spec.square_size &&
                                      pb.x() <= board_w + spec.square_size &&
                                      pb.y() >= -spec.square_size &&
                                      pb.y() <= board_h + spec.square_size;
                if (on_board)
                    shade = parity ? 30 : 220;
                else
                    shade = parity ? 70 : 100;
            }
            uint8_t *px = img.pixel(i, j);
            px[0] = px[1] = px[2] = shade;
        }
    }
    return img;
}

CaptureMeta make_session_meta(const SceneSpec &spec, Api api, double ird_w, double ird_h,
                              double depth_f_unscaled, double color_f_vga) {
    const Intrinsics &k = spec.true_intrinsics;
    const double s = ird_w / k.ref_w;
    CaptureMeta m;
    m.device = "Synthetic TrueDepth";
    m.api = api;
    m.os_version = "sim";
    m.ird_w = ird_w;
    m.ird_h = ird_h;
    m.lens_distortion_center = {k.cx * s, k.cy * s};
    m.depth_intrinsics_unscaled = Intrinsics(depth_f_unscaled, k.cx * s, k.cy * s, ird_w, ird_h);
    m.color_intrinsics = Intrinsics(color_f_vga, k.cx, k.cy, 640.0, 480.0);
    m.validate();
    return m;
}

} // namespace

RenderedView render_view(const SceneSpec &spec, int view_index) {
    spec.validate();
    if (view_index < 0 || view_index >= static_cast<int>(spec.poses.size()))
        throw_error(ErrorCode::IndexError, "view index out of range");
    const Pose &pose = spec.poses[view_index];

    RenderedView view;
    const BoardLayout layout = spec.board();
    SplitMix64 noise = SplitMix64::derive(spec.rng_seed, static_cast<uint64_t>(view_index));

    for (const auto &[id, xy] : layout.corners) {
        const Eigen::Vector3d board_point(xy.x(), xy.y(), 0.0);
        const Eigen::Vector3d cam_point = pose.apply(board_point);
        if (!(cam_point.z() > 0.0))
            throw_error(ErrorCode::DegenerateScene, "board corner behind the camera");
        Correspondence c;
        c.id = id;
        c.board_point = board_point;
        c.pixel = project(cam_point, spec.true_intrinsics);
        if (spec.corner_noise_sigma > 0.0) {
            c.pixel.x() += spec.corner_noise_sigma * noise.next_gaussian();
            c.pixel.y() += spec.corner_noise_sigma * noise.next_gaussian();
        }
        view.corners.push_back(c);
    }

    view.depth_clean =
        render_plane_depth(spec, pose, spec.depth_noise_sigma > 0.0 ? &noise : nullptr);
    view.depth = (spec.bug == InjectedBug::ZoomStretch)
                     ? apply_zoom_stretch(view.depth_clean, spec.true_intrinsics, spec.bug_factor)
                     : view.depth_clean;
    view.rgb = render_checker_rgb(spec, pose);

    const double f_unscaled = spec.true_intrinsics.f * spec.meta_ird_w / 640.0;
    switch (spec.bug) {
    case InjectedBug::None:
        view.meta_av = make_session_meta(spec, Api::AV, spec.meta_ird_w, spec.meta_ird_h,
                                         f_unscaled, spec.true_intrinsics.f);
        view.meta_ar = make_session_meta(spec, Api::ARKit, spec.meta_ird_w, spec.meta_ird_h,
                                         f_unscaled, spec.true_intrinsics.f);
        break;
    case InjectedBug::ZoomStretch:
        // The metadata symptom: the ARKit record reports enlarged reference
        // dimensions, so IRD_av / IRD_ar recovers 1 / factor.
        view.meta_av = make_session_meta(spec, Api::AV, spec.meta_ird_w, spec.meta_ird_h,
                                         f_unscaled, spec.true_intrinsics.f);
        view.meta_ar =
            make_session_meta(spec, Api::ARKit, spec.meta_ird_w * spec.bug_factor,
                              spec.meta_ird_h * spec.bug_factor, f_unscaled,
                              spec.true_intrinsics.f);
        break;
    case InjectedBug::FocalLie:
        // AV lies by the factor, ARKit by its square (the doubled-error
        // pattern), which makes both correction formulas land on the truth.
        view.meta_av =
            make_session_meta(spec, Api::AV, spec.meta_ird_w, spec.meta_ird_h,
                              f_unscaled * spec.bug_factor,
                              spec.true_intrinsics.f * spec.bug_factor);
        view.meta_ar = make_session_meta(
            spec, Api::ARKit, spec.meta_ird_w, spec.meta_ird_h,
            f_unscaled * spec.bug_factor * spec.bug_factor,
            spec.true_intrinsics.f * spec.bug_factor * spec.bug_factor);
        break;
    }
    return view;
}

void write_view_bundle(const std::filesystem::path &dir, const RenderedView &view) {
    std::filesystem::create_directories(dir);
    write_corners_csv(dir / "corners.csv", view.corners);
    write_depth_f32(dir / "depth.f32", view.depth);
    write_ppm(dir / "rgb.ppm", view.rgb);
    write_text_file(dir / "meta.json", serialize_meta(view.meta_av));
    write_text_file(dir / "meta_arkit.json", serialize_meta(view.meta_ar));
}

Pose sample_hemisphere_pose(const SceneSpec &spec, SplitMix64 &rng, double min_range,
                            double max_range, double max_tilt_rad) {
    const Eigen::Vector3d center((spec.board_cols - 1) * spec.square_size / 2.0,
                                 (spec.board_rows - 1) * spec.square_size / 2.0, 0.0);
    const double range = min_range + (max_range - min_range) * rng.next_uniform();
    const double tilt = max_tilt_rad * rng.next_uniform();
    const double azimuth = 2.0 * M_PI * rng.next_uniform();
    const double roll = 2.0 * M_PI * rng.next_uniform();

    // Camera centers live on the negative-z side of the board plane.
    const Eigen::Vector3d cam_center =
        center + range * Eigen::Vector3d(std::sin(tilt) * std::cos(azimuth),
                                         std::sin(tilt) * std::sin(azimuth), -std::cos(tilt));

    const Eigen::Vector3d forward = (center - cam_center).normalized();
    Eigen::Vector3d right = Eigen::Vector3d::UnitY().cross(forward).normalized();
    const Eigen::Vector3d down = forward.cross(right);

    Eigen::Matrix3d r_board_to_cam;
    r_board_to_cam.row(0) = right;
    r_board_to_cam.row(1) = down;
    r_board_to_cam.row(2) = forward;
    const Eigen::Matrix3d r_roll =
        Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitZ()).toRotationMatrix();

    Pose pose;
    pose.R = r_roll * r_board_to_cam;
    pose.t = -pose.R * cam_center;
    return pose;
}

void populate_hemisphere_poses(SceneSpec &spec, int n, double min_range, double max_range,
                               double max_tilt_rad) {
    spec.poses.clear();
    for (int i = 0; i < n; ++i) {
        SplitMix64 rng = SplitMix64::derive(spec.rng_seed, kPoseStreamOffset + i);
        spec.poses.push_back(sample_hemisphere_pose(spec, rng, min_range, max_range, max_tilt_rad));
    }
}

void generate_calibration_dataset(const SceneSpec &spec, const std::filesystem::path &out_dir) {
    spec.validate();
    if (spec.poses.size() < 3)
        throw_error(ErrorCode::NoUsableViews, "dataset generation needs at least 3 poses");
    std::filesystem::create_directories(out_dir);
    write_board_json(out_dir / "board.json", spec.board());
    for (size_t i = 0; i < spec.poses.size(); ++i) {
        const RenderedView view = render_view(spec, static_cast<int>(i));
        char name[32];
        std::snprintf(name, sizeof(name), "view_%03zu", i);
        write_view_bundle(out_dir / name, view);
        if (i == 0)
            write_text_file(out_dir / "meta.json", serialize_meta(view.meta_av));
    }
}

std::string scene_to_json(const SceneSpec &spec) {
    json doc;
    doc["board"] = {{"cols", spec.board_cols},
                    {"rows", spec.board_rows},
                    {"square_size", spec.square_size}};
    doc["intrinsics"] = {{"f", spec.true_intrinsics.f},
                         {"cx", spec.true_intrinsics.cx},
                         {"cy", spec.true_intrinsics.cy}};
    doc["views"] = spec.poses.size();
    doc["corner_noise_sigma"] = spec.corner_noise_sigma;
    doc["depth_noise_sigma"] = spec.depth_noise_sigma;
    const char *bug = spec.bug == InjectedBug::None ? "none"
                      : spec.bug == InjectedBug::ZoomStretch ? "zoom"
                                                             : "focal";
    doc["bug"] = {{"type", bug}, {"factor", spec.bug_factor}};
    doc["seed"] = spec.rng_seed;
    return doc.dump(2) + "\n";
}

SceneSpec scene_from_json(const std::string &text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw_error(ErrorCode::BadType, "scene description is not valid JSON");
    SceneSpec spec;
    if (doc.contains("board")) {
        spec.board_cols = doc["board"].value("cols", spec.board_cols);
        spec.board_rows = doc["board"].value("rows", spec.board_rows);
        spec.square_size = doc["board"].value("square_size", spec.square_size);
    }
    double f = 565.85, cx = 320.0, cy = 240.0;
    if (doc.contains("intrinsics")) {
        f = doc["intrinsics"].value("f", f);
        cx = doc["intrinsics"].value("cx", cx);
        cy = doc["intrinsics"].value("cy", cy);
    }
    spec.true_intrinsics = Intrinsics(f, cx, cy, 640.0, 480.0);
    spec.corner_noise_sigma = doc.value("corner_noise_sigma", 0.0);
    spec.depth_noise_sigma = doc.value("depth_noise_sigma", 0.0);
    spec.rng_seed = doc.value("seed", 0ull);
    if (doc.contains("bug")) {
        const std::string type = doc["bug"].value("type", "none");
        if (type == "none")
            spec.bug = InjectedBug::None;
        else if (type == "zoom")
            spec.bug = InjectedBug::ZoomStretch;
        else if (type == "focal")
            spec.bug = InjectedBug::FocalLie;
        else
            throw_error(ErrorCode::BadType, "bug.type must be none, zoom or focal");
        spec.bug_factor = doc["bug"].value("factor", 1.0);
    }
    const int views = doc.value("views", 1);
    if (views < 1)
        throw_error(ErrorCode::InvariantViolation, "views must be >= 1");
    populate_hemisphere_poses(spec, views);
    spec.validate();
    return spec;
}

} // namespace depthaudit

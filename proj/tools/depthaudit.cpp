#include <algorithm>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "depthaudit/audit.hpp"
#include "depthaudit/calibration.hpp"
#include "depthaudit/correction.hpp"
#include "depthaudit/io.hpp"
#include "depthaudit/synthetic.hpp"
#include "depthaudit/verification.hpp"

namespace fs = std::filesystem;
using namespace depthaudit;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIssues = 2;

CaptureMeta load_meta(const fs::path &path) { return parse_meta(read_text_file(path)); }

SessionPair load_pair(const fs::path &av_path, const fs::path &ar_path) {
    SessionPair pair;
    pair.av = load_meta(av_path);
    pair.ar = load_meta(ar_path);
    pair.key = pair.av.device;
    return pair;
}

// VGA-scaled depth intrinsics of one session record.
Intrinsics vga_depth_intrinsics(const CaptureMeta &meta) {
    return rescale_intrinsics(meta.depth_intrinsics_unscaled, 640.0, 480.0);
}

Intrinsics select_intrinsics(const std::string &choice, const fs::path &bundle) {
    const CaptureMeta av = load_meta(bundle / "meta.json");
    if (choice == "factory")
        return vga_depth_intrinsics(av);
    if (choice == "corrected") {
        const CaptureMeta ar = load_meta(bundle / "meta_arkit.json");
        const FocalCorrection c =
            correct_focal_av(av.depth_intrinsics_unscaled.f, ar.depth_intrinsics_unscaled.f,
                             av.ird_w);
        Intrinsics k = vga_depth_intrinsics(av);
        k.f = c.f_vga;
        return k;
    }
    if (choice.rfind("file:", 0) == 0) {
        const json doc = json::parse(read_text_file(choice.substr(5)));
        return Intrinsics(doc.at("f").get<double>(), doc.at("cx").get<double>(),
                          doc.at("cy").get<double>(), 640.0, 480.0);
    }
    throw_error(ErrorCode::BadType,
                "--intrinsics must be factory, corrected or file:<path>, got " + choice);
}

fs::path find_board_json(const fs::path &bundle) {
    if (fs::exists(bundle / "board.json"))
        return bundle / "board.json";
    if (fs::exists(bundle.parent_path() / "board.json"))
        return bundle.parent_path() / "board.json";
    throw_error(ErrorCode::IoError, "no board.json in " + bundle.string() + " or its parent");
}

std::vector<Correspondence> load_bundle_corners(const fs::path &bundle) {
    const BoardLayout board = read_board_json(find_board_json(bundle));
    return board.resolve(read_corners_csv(bundle / "corners.csv"));
}

int cmd_audit(const std::vector<std::pair<fs::path, fs::path>> &pairs, bool use_fixtures,
              const std::string &out_path, const AuditThresholds &thresholds) {
    std::vector<AuditVerdict> verdicts;
    if (use_fixtures) {
        for (const auto &pair : fixture_database())
            verdicts.push_back(classify(pair, thresholds));
    } else {
        for (const auto &[av, ar] : pairs)
            verdicts.push_back(classify(load_pair(av, ar), thresholds));
    }
    std::cout << audit_report_text(verdicts);
    if (!out_path.empty())
        write_text_file(out_path, audit_report_json(verdicts));
    const bool all_healthy = std::all_of(verdicts.begin(), verdicts.end(), [](const auto &v) {
        return v.cls == IssueClass::Healthy;
    });
    return all_healthy ? kExitOk : kExitIssues;
}

int cmd_fix_depth(const fs::path &bundle, fs::path av_meta, fs::path ar_meta, const fs::path &out,
                  bool force) {
    if (av_meta.empty())
        av_meta = bundle / "meta.json";
    if (ar_meta.empty())
        ar_meta = bundle / "meta_arkit.json";
    const SessionPair pair = load_pair(av_meta, ar_meta);
    const AuditVerdict verdict = classify(pair);
    if (verdict.cls != IssueClass::ZoomMisalignment && !force) {
        std::cerr << "verdict is " << issue_class_name(verdict.cls)
                  << ", not ZoomMisalignment; pass --force to zoom anyway\n";
        return kExitIssues;
    }
    const ZoomFactors z = zoom_factors(pair);
    const DepthMap depth = read_depth_f32(bundle / "depth.f32");
    const DepthMap fixed = zoom_depth_map(depth, vga_depth_intrinsics(pair.av), z);

    fs::create_directories(out);
    write_depth_f32(out / "depth.f32", fixed);
    json meta_doc = json::parse(read_text_file(av_meta));
    meta_doc["corrections"].push_back(
        {{"type", "zoom_depth_map"}, {"zoom_x", z.zx}, {"zoom_y", z.zy}});
    write_text_file(out / "meta.json", meta_doc.dump(2) + "\n");
    for (const char *extra : {"rgb.ppm", "corners.csv", "meta_arkit.json"})
        if (fs::exists(bundle / extra) && !fs::exists(out / extra))
            fs::copy_file(bundle / extra, out / extra);
    std::cout << "zoomed depth by (" << z.zx << ", " << z.zy << ") into " << out.string() << "\n";
    return kExitOk;
}

int cmd_fix_intrinsics(const fs::path &av_meta, const fs::path &ar_meta,
                       const std::string &session, const std::string &out_path) {
    const SessionPair pair = load_pair(av_meta, ar_meta);
    const AuditVerdict verdict = classify(pair);
    const bool av_session = session == "av";
    const CaptureMeta &target = av_session ? pair.av : pair.ar;

    json doc = json::parse(read_text_file(av_session ? av_meta : ar_meta));
    if (verdict.cls != IssueClass::WrongFocal) {
        std::cout << "no correction needed: sessions agree (depth diff "
                  << verdict.depth_intrinsics_diff_pct << "%)\n";
        doc["corrections"].push_back({{"type", "focal"}, {"note", "no correction needed"}});
    } else {
        const FocalCorrection c =
            av_session ? correct_focal_av(pair.av.depth_intrinsics_unscaled.f,
                                          pair.ar.depth_intrinsics_unscaled.f, pair.av.ird_w)
                       : correct_focal_ar(pair.ar.depth_intrinsics_unscaled.f,
                                          pair.av.depth_intrinsics_unscaled.f, pair.ar.ird_w);
        doc["depth_intrinsics_unscaled"]["fx"] = c.f_corrected;
        doc["depth_intrinsics_unscaled"]["fy"] = c.f_corrected;
        doc["corrections"].push_back({{"type", "focal"},
                                      {"previous_fx", target.depth_intrinsics_unscaled.f},
                                      {"corrected_unscaled", c.f_corrected},
                                      {"corrected_vga", c.f_vga}});
        std::cout << "corrected " << session << " focal: unscaled " << c.f_corrected << " px, VGA "
                  << c.f_vga << " px\n";
    }
    if (!out_path.empty())
        write_text_file(out_path, doc.dump(2) + "\n");
    return kExitOk;
}

int cmd_unproject(const fs::path &bundle, const std::string &intrinsics_choice,
                  const fs::path &out) {
    if (!fs::exists(bundle / "depth.f32")) {
        std::cerr << "bundle has no depth.f32\n";
        return kExitError;
    }
    const DepthMap depth = read_depth_f32(bundle / "depth.f32");
    const Intrinsics k = select_intrinsics(intrinsics_choice, bundle);
    const std::vector<Eigen::Vector3d> cloud = unproject_all(depth, k);
    write_ply(out, cloud);
    std::cout << "wrote " << cloud.size() << " vertices to " << out.string() << "\n";
    return kExitOk;
}

int cmd_verify_depth(const fs::path &bundle, const std::string &intrinsics_choice,
                     std::string out_prefix, double bin_width_mm) {
    const DepthMap depth = read_depth_f32(bundle / "depth.f32");
    const std::vector<Correspondence> corrs = load_bundle_corners(bundle);
    const Intrinsics k = select_intrinsics(intrinsics_choice, bundle);
    const std::string label =
        intrinsics_choice.rfind("file:", 0) == 0 ? "file" : intrinsics_choice;
    const DepthErrorReport report = verify_depth(depth, corrs, k, bin_width_mm, label);
    if (out_prefix.empty())
        out_prefix = (bundle / "report").string();
    write_text_file(out_prefix + ".json", depth_report_json(report));
    const HistogramDocs docs = emit_histogram(report);
    write_text_file(out_prefix + "_hist.svg", docs.svg);
    write_text_file(out_prefix + "_hist.csv", docs.csv);
    std::cout << "d = Z_depth - Z_board over " << report.records.size() << " corners: mean "
              << report.mean_d_mm << " mm, median " << report.median_d_mm << " mm, std "
              << report.std_d_mm << " mm (" << report.invalid_corners << " invalid)\n";
    return kExitOk;
}

int cmd_calibrate(const fs::path &dataset, double voxel_mm, double init_f, double compare_f,
                  const std::string &out_path) {
    const BoardLayout board = read_board_json(dataset / "board.json");
    std::vector<std::vector<Correspondence>> views;
    std::vector<fs::path> dirs;
    for (const auto &entry : fs::directory_iterator(dataset))
        if (entry.is_directory() && fs::exists(entry.path() / "corners.csv"))
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto &dir : dirs)
        views.push_back(board.resolve(read_corners_csv(dir / "corners.csv")));

    Intrinsics k_init = vga_depth_intrinsics(load_meta(dataset / "meta.json"));
    double factory_f = k_init.f;
    if (init_f > 0.0)
        k_init.f = init_f;

    CalibrationOptions options;
    options.voxel_size = voxel_mm / 1000.0;
    const CalibrationResult result = run_calibration(views, k_init, options);

    json doc;
    doc["schema_version"] = 1;
    doc["f"] = result.f;
    doc["rms_reproj_px"] = result.rms_reproj_px;
    doc["views_used"] = result.views_used;
    doc["views_rejected_corners"] = result.views_rejected_corners;
    doc["views_rejected_voxel"] = result.views_rejected_voxel;
    doc["ill_conditioned"] = result.ill_conditioned;
    doc["factory_f"] = factory_f;
    doc["focal_discrepancy_pct"] = focal_discrepancy(factory_f, result.f);
    if (compare_f > 0.0)
        doc["compare_discrepancy_pct"] = focal_discrepancy(compare_f, result.f);
    if (!out_path.empty())
        write_text_file(out_path, doc.dump(2) + "\n");
    std::cout << "calibrated f = " << result.f << " px over " << result.views_used
              << " views (rms " << result.rms_reproj_px << " px); factory " << factory_f
              << " px, discrepancy " << focal_discrepancy(factory_f, result.f) << "%\n";
    if (compare_f > 0.0)
        std::cout << "discrepancy vs --compare " << compare_f << " px: "
                  << focal_discrepancy(compare_f, result.f) << "%\n";
    return kExitOk;
}

int cmd_simulate(const fs::path &scene_path, const fs::path &out, int threads) {
    const SceneSpec spec = scene_from_json(read_text_file(scene_path));
    fs::create_directories(out);
    write_board_json(out / "board.json", spec.board());

    const int n = static_cast<int>(spec.poses.size());
    const int workers = std::max(1, std::min(threads, n));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) {
                const RenderedView view = render_view(spec, i);
                char name[32];
                std::snprintf(name, sizeof(name), "view_%03d", i);
                write_view_bundle(out / name, view);
            }
        });
    }
    for (auto &t : pool)
        t.join();

    // Top-level metadata copy for the calibrate init guess.
    const RenderedView first = render_view(spec, 0);
    write_text_file(out / "meta.json", serialize_meta(first.meta_av));
    write_text_file(out / "meta_arkit.json", serialize_meta(first.meta_ar));
    std::cout << "rendered " << n << " views into " << out.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"TrueDepth capture metadata audit and correction toolkit"};
    app.require_subcommand(1);

    // audit
    auto *audit = app.add_subcommand("audit", "Classify AV/ARKit session pairs");
    std::string audit_av, audit_ar, audit_out;
    bool audit_fixtures = false;
    AuditThresholds thresholds;
    audit->add_option("--av", audit_av, "AV session meta.json");
    audit->add_option("--ar", audit_ar, "ARKit session meta.json");
    audit->add_flag("--fixtures", audit_fixtures, "audit the bundled device fixtures");
    audit->add_option("--out", audit_out, "write report JSON here");
    audit->add_option("--depth-threshold", thresholds.depth_pct, "percent");
    audit->add_option("--ird-threshold", thresholds.ird_pct, "percent");

    // fix-depth
    auto *fix_depth = app.add_subcommand("fix-depth", "Zoom a misaligned depth raster");
    std::string fd_bundle, fd_av, fd_ar, fd_out;
    bool fd_force = false;
    fix_depth->add_option("--bundle", fd_bundle)->required();
    fix_depth->add_option("--av-meta", fd_av, "defaults to <bundle>/meta.json");
    fix_depth->add_option("--ar-meta", fd_ar, "defaults to <bundle>/meta_arkit.json");
    fix_depth->add_option("--out", fd_out)->required();
    fix_depth->add_flag("--force", fd_force, "zoom even when the verdict disagrees");

    // fix-intrinsics
    auto *fix_intr = app.add_subcommand("fix-intrinsics", "Correct a wrong factory focal length");
    std::string fi_av, fi_ar, fi_session = "av", fi_out;
    fix_intr->add_option("--av-meta", fi_av)->required();
    fix_intr->add_option("--ar-meta", fi_ar)->required();
    fix_intr->add_option("--session", fi_session, "av or ar")
        ->check(CLI::IsMember({"av", "ar"}));
    fix_intr->add_option("--out", fi_out, "write corrected meta.json here");

    // unproject
    auto *unproject_cmd = app.add_subcommand("unproject", "Depth raster to an ASCII PLY cloud");
    std::string up_bundle, up_intrinsics = "factory", up_out = "cloud.ply";
    unproject_cmd->add_option("--bundle", up_bundle)->required();
    unproject_cmd->add_option("--intrinsics", up_intrinsics, "factory | corrected | file:<path>");
    unproject_cmd->add_option("--out", up_out);

    // verify-depth
    auto *verify = app.add_subcommand("verify-depth", "Board-vs-raster depth comparison");
    std::string vd_bundle, vd_intrinsics = "factory", vd_prefix;
    double vd_bin = 0.25;
    verify->add_option("--bundle", vd_bundle)->required();
    verify->add_option("--intrinsics", vd_intrinsics, "factory | corrected | file:<path>");
    verify->add_option("--out-prefix", vd_prefix, "defaults to <bundle>/report");
    verify->add_option("--bin-mm", vd_bin, "histogram bin width");

    // calibrate
    auto *calibrate = app.add_subcommand("calibrate", "Focal-only Charuco-style calibration");
    std::string cal_dataset, cal_out;
    double cal_voxel_mm = 30.0, cal_init_f = 0.0, cal_compare = 0.0;
    calibrate->add_option("--dataset", cal_dataset)->required();
    calibrate->add_option("--voxel-mm", cal_voxel_mm);
    calibrate->add_option("--init-f", cal_init_f, "override the factory initial guess");
    calibrate->add_option("--compare", cal_compare, "extra focal to report a discrepancy against");
    calibrate->add_option("--out", cal_out);

    // simulate
    auto *simulate = app.add_subcommand("simulate", "Render synthetic capture bundles");
    std::string sim_scene, sim_out;
    int sim_threads = 1;
    simulate->add_option("--scene", sim_scene)->required();
    simulate->add_option("--out", sim_out)->required();
    simulate->add_option("--threads", sim_threads, "worker threads (output is identical)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (audit->parsed()) {
            std::vector<std::pair<fs::path, fs::path>> pairs;
            if (!audit_fixtures) {
                if (audit_av.empty() || audit_ar.empty()) {
                    std::cerr << "audit needs --av and --ar (or --fixtures)\n";
                    return kExitError;
                }
                pairs.emplace_back(audit_av, audit_ar);
            }
            return cmd_audit(pairs, audit_fixtures, audit_out, thresholds);
        }
        if (fix_depth->parsed())
            return cmd_fix_depth(fd_bundle, fd_av, fd_ar, fd_out, fd_force);
        if (fix_intr->parsed())
            return cmd_fix_intrinsics(fi_av, fi_ar, fi_session, fi_out);
        if (unproject_cmd->parsed())
            return cmd_unproject(up_bundle, up_intrinsics, up_out);
        if (verify->parsed())
            return cmd_verify_depth(vd_bundle, vd_intrinsics, vd_prefix, vd_bin);
        if (calibrate->parsed())
            return cmd_calibrate(cal_dataset, cal_voxel_mm, cal_init_f, cal_compare, cal_out);
        if (simulate->parsed())
            return cmd_simulate(sim_scene, sim_out, sim_threads);
    } catch (const AuditError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

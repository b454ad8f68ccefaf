#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "depthaudit/camera.hpp"
#include "depthaudit/pose.hpp"

namespace depthaudit {

// depth.f32: 16-byte header (magic "DPF1", u32 width, u32 height, u32
// reserved, little-endian) followed by row-major little-endian 32-bit floats.
// NaN marks invalid pixels.
void write_depth_f32(const std::filesystem::path &path, const DepthMap &d);
DepthMap read_depth_f32(const std::filesystem::path &path);

struct PpmImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> rgb; // 3 bytes per pixel, row-major

    PpmImage() = default;
    PpmImage(int w, int h) : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3, 0) {}

    uint8_t *pixel(int i, int j) { return &rgb[(static_cast<size_t>(j) * width + i) * 3]; }
    const uint8_t *pixel(int i, int j) const {
        return &rgb[(static_cast<size_t>(j) * width + i) * 3];
    }
};

void write_ppm(const std::filesystem::path &path, const PpmImage &img);
PpmImage read_ppm(const std::filesystem::path &path);

// ASCII PLY, one float x/y/z vertex per point.
std::string ply_from_points(const std::vector<Eigen::Vector3d> &points);
void write_ply(const std::filesystem::path &path, const std::vector<Eigen::Vector3d> &points);

// corners.csv: header "id,u,v", one row per detected corner.
std::string corners_to_csv(const std::vector<Correspondence> &corrs);
std::vector<Correspondence> corners_from_csv(const std::string &text);
void write_corners_csv(const std::filesystem::path &path, const std::vector<Correspondence> &corrs);
std::vector<Correspondence> read_corners_csv(const std::filesystem::path &path);

// board.json: {"corners": {"<id>": [x, y], ...}} in meters on the board plane.
struct BoardLayout {
    std::map<int, Eigen::Vector2d> corners;

    // Joins pixel observations with board geometry; corners without a board
    // entry are dropped.
    std::vector<Correspondence> resolve(const std::vector<Correspondence> &pixels) const;
};

std::string board_to_json(const BoardLayout &board);
BoardLayout board_from_json(const std::string &text);
void write_board_json(const std::filesystem::path &path, const BoardLayout &board);
BoardLayout read_board_json(const std::filesystem::path &path);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace depthaudit

#include "depthaudit/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace depthaudit {

namespace {

void put_u32_le(std::string &out, uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

uint32_t get_u32_le(const unsigned char *p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

std::string read_binary_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw_error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_binary_file(const std::filesystem::path &path, const std::string &data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw_error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw_error(ErrorCode::IoError, "short write to " + path.string());
}

// Shortest decimal representation that round-trips a double; keeps all text
// outputs byte-deterministic.
std::string format_double(double v) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double parsed = 0.0;
        std::sscanf(buf, "%lf", &parsed);
        if (parsed == v)
            break;
    }
    return buf;
}

} // namespace

void write_depth_f32(const std::filesystem::path &path, const DepthMap &d) {
    std::string payload;
    payload.reserve(16 + d.values().size() * 4);
    payload += "DPF1";
    put_u32_le(payload, static_cast<uint32_t>(d.width()));
    put_u32_le(payload, static_cast<uint32_t>(d.height()));
    put_u32_le(payload, 0);
    static_assert(sizeof(float) == 4);
    for (float v : d.values()) {
        uint32_t bits;
        std::memcpy(&bits, &v, 4);
        put_u32_le(payload, bits); // little-endian regardless of host order
    }
    write_binary_file(path, payload);
}

DepthMap read_depth_f32(const std::filesystem::path &path) {
    const std::string data = read_binary_file(path);
    const size_t expected = 16 + static_cast<size_t>(DepthMap::kWidth) * DepthMap::kHeight * 4;
    if (data.size() != expected || data.compare(0, 4, "DPF1") != 0)
        throw_error(ErrorCode::BadType, path.string() + " is not a DPF1 raster");
    const auto *p = reinterpret_cast<const unsigned char *>(data.data());
    if (get_u32_le(p + 4) != DepthMap::kWidth || get_u32_le(p + 8) != DepthMap::kHeight)
        throw_error(ErrorCode::DimensionError, path.string() + " has unexpected dimensions");
    std::vector<float> values(static_cast<size_t>(DepthMap::kWidth) * DepthMap::kHeight);
    for (size_t i = 0; i < values.size(); ++i) {
        const uint32_t bits = get_u32_le(p + 16 + i * 4);
        std::memcpy(&values[i], &bits, 4);
    }
    return DepthMap(std::move(values));
}

void write_ppm(const std::filesystem::path &path, const PpmImage &img) {
    std::string payload = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                          "\n255\n";
    payload.append(reinterpret_cast<const char *>(img.rgb.data()), img.rgb.size());
    write_binary_file(path, payload);
}

PpmImage read_ppm(const std::filesystem::path &path) {
    const std::string data = read_binary_file(path);
    std::istringstream in(data);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P6" || w <= 0 || h <= 0 || maxval != 255)
        throw_error(ErrorCode::BadType, path.string() + " is not an 8-bit P6 PPM");
    in.get(); // single whitespace after header
    PpmImage img(w, h);
    const size_t offset = static_cast<size_t>(in.tellg());
    if (data.size() - offset < img.rgb.size())
        throw_error(ErrorCode::IoError, path.string() + " is truncated");
    std::memcpy(img.rgb.data(), data.data() + offset, img.rgb.size());
    return img;
}

std::string ply_from_points(const std::vector<Eigen::Vector3d> &points) {
    std::ostringstream out;
    out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
        << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
    for (const auto &p : points)
        out << format_double(p.x()) << " " << format_double(p.y()) << " " << format_double(p.z())
            << "\n";
    return out.str();
}

void write_ply(const std::filesystem::path &path, const std::vector<Eigen::Vector3d> &points) {
    write_binary_file(path, ply_from_points(points));
}

std::string corners_to_csv(const std::vector<Correspondence> &corrs) {
    std::string out = "id,u,v\n";
    for (const auto &c : corrs)
        out += std::to_string(c.id) + "," + format_double(c.pixel.x()) + "," +
               format_double(c.pixel.y()) + "\n";
    return out;
}

std::vector<Correspondence> corners_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "id,u,v")
        throw_error(ErrorCode::BadType, "corners.csv must start with header id,u,v");
    std::vector<Correspondence> corrs;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        Correspondence c;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf", &c.id, &c.pixel.x(), &c.pixel.y()) != 3)
            throw_error(ErrorCode::BadType, "bad corners.csv row: " + line);
        corrs.push_back(c);
    }
    return corrs;
}

void write_corners_csv(const std::filesystem::path &path,
                       const std::vector<Correspondence> &corrs) {
    write_binary_file(path, corners_to_csv(corrs));
}

std::vector<Correspondence> read_corners_csv(const std::filesystem::path &path) {
    return corners_from_csv(read_binary_file(path));
}

std::vector<Correspondence>
BoardLayout::resolve(const std::vector<Correspondence> &pixels) const {
    std::vector<Correspondence> out;
    for (const auto &c : pixels) {
        auto it = corners.find(c.id);
        if (it == corners.end())
            continue;
        Correspondence r = c;
        r.board_point = {it->second.x(), it->second.y(), 0.0};
        out.push_back(r);
    }
    return out;
}

std::string board_to_json(const BoardLayout &board) {
    nlohmann::ordered_json doc;
    auto &corners = doc["corners"];
    for (const auto &[id, xy] : board.corners)
        corners[std::to_string(id)] = {xy.x(), xy.y()};
    return doc.dump(2) + "\n";
}

BoardLayout board_from_json(const std::string &text) {
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("corners"))
        throw_error(ErrorCode::BadType, "board.json must contain a corners object");
    BoardLayout board;
    for (const auto &[key, value] : doc["corners"].items()) {
        if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
            !value[1].is_number())
            throw_error(ErrorCode::BadType, "board corner " + key + " must be [x, y]");
        size_t consumed = 0;
        int id = 0;
        try {
            id = std::stoi(key, &consumed);
        } catch (const std::exception &) {
            throw_error(ErrorCode::BadType, "board corner id " + key + " is not an integer");
        }
        if (consumed != key.size())
            throw_error(ErrorCode::BadType, "board corner id " + key + " is not an integer");
        board.corners[id] = {value[0].get<double>(), value[1].get<double>()};
    }
    return board;
}

void write_board_json(const std::filesystem::path &path, const BoardLayout &board) {
    write_binary_file(path, board_to_json(board));
}

BoardLayout read_board_json(const std::filesystem::path &path) {
    return board_from_json(read_binary_file(path));
}

std::string read_text_file(const std::filesystem::path &path) { return read_binary_file(path); }

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    write_binary_file(path, text);
}

} // namespace depthaudit

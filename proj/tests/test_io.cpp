#include <doctest.h>

#include <cstdint>
#include <fstream>

#include "depthaudit/io.hpp"
#include "test_helpers.hpp"

using namespace depthaudit;
namespace fs = std::filesystem;

TEST_CASE("depth.f32 round trip is byte-exact including NaN") {
    const fs::path dir = testing::fresh_dir("io_depth");
    DepthMap d;
    d.set(0, 0, 1.25f);
    d.set(639, 479, -3.5f);
    d.set(12, 34, 0.123456789f);
    write_depth_f32(dir / "depth.f32", d);
    const DepthMap back = read_depth_f32(dir / "depth.f32");
    for (size_t i = 0; i < d.values().size(); ++i) {
        const float a = d.values()[i], b = back.values()[i];
        if (std::isnan(a))
            CHECK(std::isnan(b));
        else
            CHECK(a == b);
    }
    // Header: magic + 640 + 480 + reserved, little endian.
    std::ifstream in(dir / "depth.f32", std::ios::binary);
    char header[16];
    in.read(header, 16);
    CHECK(std::string(header, 4) == "DPF1");
    const auto u32 = [&](int off) {
        return static_cast<uint32_t>(static_cast<uint8_t>(header[off])) |
               static_cast<uint32_t>(static_cast<uint8_t>(header[off + 1])) << 8 |
               static_cast<uint32_t>(static_cast<uint8_t>(header[off + 2])) << 16 |
               static_cast<uint32_t>(static_cast<uint8_t>(header[off + 3])) << 24;
    };
    CHECK(u32(4) == 640);
    CHECK(u32(8) == 480);
    CHECK(u32(12) == 0);
}

TEST_CASE("depth.f32 reader rejects corrupt files") {
    const fs::path dir = testing::fresh_dir("io_depth_bad");
    write_text_file(dir / "bad.f32", "XXXXgarbage");
    CHECK_THROWS_AS(read_depth_f32(dir / "bad.f32"), AuditError);
    CHECK_THROWS_AS(read_depth_f32(dir / "missing.f32"), AuditError);
}

TEST_CASE("ppm round trip") {
    const fs::path dir = testing::fresh_dir("io_ppm");
    PpmImage img(3, 2);
    for (size_t i = 0; i < img.rgb.size(); ++i)
        img.rgb[i] = static_cast<uint8_t>(i * 17);
    write_ppm(dir / "img.ppm", img);
    const PpmImage back = read_ppm(dir / "img.ppm");
    CHECK(back.width == 3);
    CHECK(back.height == 2);
    CHECK(back.rgb == img.rgb);
}

TEST_CASE("ply text holds one vertex per point") {
    const std::string text = ply_from_points({{1.0, 2.0, 3.0}, {-0.5, 0.0, 4.25}});
    CHECK(text.find("element vertex 2") != std::string::npos);
    CHECK(text.find("format ascii") != std::string::npos);
    CHECK(text.find("1 2 3") != std::string::npos);
    CHECK(text.find("-0.5 0 4.25") != std::string::npos);
}

TEST_CASE("corners csv round trip") {
    std::vector<Correspondence> corrs(2);
    corrs[0].id = 3;
    corrs[0].pixel = {10.25, 20.5};
    corrs[1].id = 7;
    corrs[1].pixel = {100.125, 200.0625};
    const std::string csv = corners_to_csv(corrs);
    CHECK(csv.rfind("id,u,v\n", 0) == 0);
    const auto back = corners_from_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[0].id == 3);
    CHECK(back[0].pixel.x() == 10.25);
    CHECK(back[1].pixel.y() == 200.0625);
}

TEST_CASE("board json round trip and correspondence resolution") {
    BoardLayout board;
    board.corners[0] = {0.0, 0.0};
    board.corners[5] = {0.1, 0.04};
    const BoardLayout back = board_from_json(board_to_json(board));
    REQUIRE(back.corners.size() == 2);
    CHECK(back.corners.at(5).x() == 0.1);

    std::vector<Correspondence> pixels(2);
    pixels[0].id = 5;
    pixels[0].pixel = {50.0, 60.0};
    pixels[1].id = 99; // not on the board -> dropped
    pixels[1].pixel = {1.0, 1.0};
    const auto resolved = back.resolve(pixels);
    REQUIRE(resolved.size() == 1);
    CHECK(resolved[0].id == 5);
    CHECK(resolved[0].board_point.x() == doctest::Approx(0.1));
    CHECK(resolved[0].board_point.z() == 0.0);
    CHECK(resolved[0].pixel.x() == 50.0);
}

TEST_CASE("board json rejects malformed documents") {
    CHECK_THROWS_AS(board_from_json("{}"), AuditError);
    CHECK_THROWS_AS(board_from_json("{\"corners\": {\"a\": [1, 2]}}"), AuditError);
    CHECK_THROWS_AS(board_from_json("not json"), AuditError);
}

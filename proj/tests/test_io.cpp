#include <gtest/gtest.h>

#include <csetjmp>
#include <cstdio>
#include <fstream>

#include <jpeglib.h>

#include "starlet/io.hpp"
#include "test_util.hpp"

using namespace starlet;
namespace fs = std::filesystem;

namespace {

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

std::string pgm8(std::size_t w, std::size_t h, const std::vector<unsigned char>& samples) {
    std::string s = "P5\n# comment\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    s.append(samples.begin(), samples.end());
    return s;
}

void write_gray_jpeg(const fs::path& p, std::size_t w, std::size_t h, const std::vector<unsigned char>& samples) {
    jpeg_compress_struct cinfo{};
    jpeg_error_mgr err{};
    cinfo.err = jpeg_std_error(&err);
    jpeg_create_compress(&cinfo);
    FILE* fp = std::fopen(p.c_str(), "wb");
    ASSERT_NE(fp, nullptr);
    jpeg_stdio_dest(&cinfo, fp);
    cinfo.image_width = static_cast<JDIMENSION>(w);
    cinfo.image_height = static_cast<JDIMENSION>(h);
    cinfo.input_components = 1;
    cinfo.in_color_space = JCS_GRAYSCALE;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, 100, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(samples.data() + cinfo.next_scanline * w);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::fclose(fp);
}

}  // namespace

TEST(OutputPath, NamingRule) {
    EXPECT_EQ(output_path("", "test1", OutputKind::R, 2).string(), "test1_R2.png");
    EXPECT_EQ(output_path("", "test1", OutputKind::COMP, 3).string(), "test1_COMP3.png");
    EXPECT_EQ(output_path("", file_stem("dir/a.b.jpg"), OutputKind::D, 1).string(), "a.b_D1.png");
    EXPECT_EQ(output_path("out", "x", OutputKind::D, 12), fs::path("out") / "x_D12.png");
    EXPECT_THROW(output_path("", "x", OutputKind::D, 0), ValidationError);
}

TEST(OutputPath, NamesParseBackUnambiguously) {
    for (const std::string stem : {"test1", "a.b", "x_R2", "x_D1_COMP3", "weird_", "_"})
        for (OutputKind kind : {OutputKind::D, OutputKind::R, OutputKind::COMP})
            for (int level : {1, 2, 9, 10, 123}) {
                const auto parsed = parse_output_name(output_path("", stem, kind, level).string());
                ASSERT_TRUE(parsed.has_value());
                EXPECT_EQ(parsed->stem, stem);
                EXPECT_EQ(parsed->kind, kind);
                EXPECT_EQ(parsed->level, level);
            }
    EXPECT_FALSE(parse_output_name("test1.png").has_value());
    EXPECT_FALSE(parse_output_name("test1_mcc.csv").has_value());
}

TEST(Load, PgmNormalization) {
    const auto dir = testutil::scratch_dir("io_pgm");
    write_bytes(dir / "g.pgm", pgm8(2, 1, {128, 255}));
    const auto img = load_grayscale((dir / "g.pgm").string());
    EXPECT_EQ(img.pixels.width(), 2u);
    EXPECT_EQ(img.original_channels, 1);
    EXPECT_DOUBLE_EQ(img.pixels[0], 128.0 / 255.0);
    EXPECT_DOUBLE_EQ(img.pixels[1], 1.0);
}

TEST(Load, Pgm16Bit) {
    const auto dir = testutil::scratch_dir("io_pgm16");
    std::string s = "P5\n1 1\n65535\n";
    s += static_cast<char>(0x80);
    s += static_cast<char>(0x00);
    write_bytes(dir / "g.pgm", s);
    EXPECT_DOUBLE_EQ(load_grayscale((dir / "g.pgm").string()).pixels[0], 32768.0 / 65535.0);
}

TEST(Load, RgbPngUsesLuma) {
    const auto dir = testutil::scratch_dir("io_rgb");
    const auto p = dir / "c.png";
    detail::encode_png(p.string(), 3, 1, 3, {255, 255, 255, 255, 0, 0, 0, 0, 255});
    const auto img = load_grayscale(p.string());
    EXPECT_EQ(img.original_channels, 3);
    EXPECT_DOUBLE_EQ(img.pixels[0], 1.0);
    EXPECT_NEAR(img.pixels[1], 0.299, 1e-12);
    EXPECT_NEAR(img.pixels[2], 0.114, 1e-12);
}

TEST(Load, JpegGray) {
    const auto dir = testutil::scratch_dir("io_jpeg");
    const auto p = dir / "flat.jpg";
    write_gray_jpeg(p, 16, 16, std::vector<unsigned char>(256, 200));
    const auto img = load_grayscale(p.string());
    ASSERT_EQ(img.pixels.size(), 256u);
    for (double v : img.pixels) EXPECT_NEAR(v, 200.0 / 255.0, 2.0 / 255.0);
}

TEST(Load, ErrorsAreDistinct) {
    const auto dir = testutil::scratch_dir("io_err");
    try {
        load_grayscale((dir / "missing.png").string());
        FAIL();
    } catch (const IoError& e) {
        EXPECT_EQ(e.kind(), IoError::Kind::Unreadable);
    }
    write_bytes(dir / "x.bmp", "BM not an image we read");
    try {
        load_grayscale((dir / "x.bmp").string());
        FAIL();
    } catch (const IoError& e) {
        EXPECT_EQ(e.kind(), IoError::Kind::UnsupportedFormat);
    }
    write_bytes(dir / "z.pgm", "P5\n0 4\n255\n");
    try {
        load_grayscale((dir / "z.pgm").string());
        FAIL();
    } catch (const IoError& e) {
        EXPECT_EQ(e.kind(), IoError::Kind::EmptyImage);
    }
    write_bytes(dir / "t.png", std::string("\x89PNG\r\n\x1a\n\0\0", 10));
    EXPECT_THROW(load_grayscale((dir / "t.png").string()), IoError);
}

TEST(GroundTruth, StrictMidpointCut) {
    const auto dir = testutil::scratch_dir("io_gt");
    // 122/255 ~ 0.478, 133/255 ~ 0.522
    write_bytes(dir / "gt.pgm", pgm8(4, 1, {0, 122, 133, 255}));
    const auto gt = load_ground_truth((dir / "gt.pgm").string());
    EXPECT_EQ(gt.mask[0], 0);
    EXPECT_EQ(gt.mask[1], 0);
    EXPECT_EQ(gt.mask[2], 1);
    EXPECT_EQ(gt.mask[3], 1);

    write_bytes(dir / "black.pgm", pgm8(3, 3, std::vector<unsigned char>(9, 0)));
    EXPECT_EQ(count_nonzero(load_ground_truth((dir / "black.pgm").string()).mask), 0u);
}

TEST(Save, MaskRoundTrip) {
    const auto dir = testutil::scratch_dir("io_mask");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const BinaryImage m = testutil::random_mask(17, 11, seed);
        const auto p = dir / ("m" + std::to_string(seed) + ".png");
        save_plane(m, p);
        EXPECT_EQ(load_ground_truth(p.string()).mask, m);
    }
}

TEST(Save, SingleRoiPixel) {
    const auto dir = testutil::scratch_dir("io_one");
    BinaryImage m(5, 5, 0);
    m(2, 3) = 1;
    save_plane(m, dir / "one.png");
    const auto img = load_grayscale((dir / "one.png").string());
    EXPECT_EQ(std::count(img.pixels.begin(), img.pixels.end(), 1.0), 1);
    EXPECT_EQ(std::count(img.pixels.begin(), img.pixels.end(), 0.0), 24);
}

TEST(Save, DetailRescaling) {
    const auto dir = testutil::scratch_dir("io_detail");
    save_plane(GrayImage(4, 4, 0.3), dir / "flat.png");
    for (double v : load_grayscale((dir / "flat.png").string()).pixels) EXPECT_EQ(v, 0.0);

    GrayImage ramp(3, 1);
    ramp[0] = -2.0;
    ramp[1] = 0.0;
    ramp[2] = 2.0;
    save_plane(ramp, dir / "ramp.png");
    const auto back = load_grayscale((dir / "ramp.png").string()).pixels;
    EXPECT_EQ(back[0], 0.0);
    EXPECT_DOUBLE_EQ(back[1], 128.0 / 255.0);
    EXPECT_EQ(back[2], 1.0);
}

TEST(Save, CompRoundTripIsLossless) {
    const auto dir = testutil::scratch_dir("io_comp");
    RgbImage img(3, 2);
    const Rgb palette[] = {{0, 255, 0}, {255, 0, 0}, {0, 0, 255}, {0, 0, 0}};
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = palette[i % 4];
    save_plane(img, dir / "comp.png");
    const auto bytes = detail::read_file((dir / "comp.png").string());
    const auto raw = detail::decode_png(bytes, "comp.png");
    ASSERT_EQ(raw.channels, 3);
    for (std::size_t i = 0; i < img.size(); ++i)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(raw.samples[3 * i + c], img[i][c]);
}

TEST(Save, PgmRoundTrip) {
    const auto dir = testutil::scratch_dir("io_pgmw");
    const GrayImage g = testutil::random_image(9, 7, 3);
    const auto q = quantize8(g);
    save_pgm(q, dir / "q.pgm");
    const auto back = load_grayscale((dir / "q.pgm").string()).pixels;
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(back[i], q[i] / 255.0);
}

TEST(Save, CreatesParentAndReportsFailure) {
    const auto dir = testutil::scratch_dir("io_parent");
    save_plane(BinaryImage(2, 2, 1), dir / "a" / "b" / "m.png");
    EXPECT_TRUE(fs::exists(dir / "a" / "b" / "m.png"));
    write_bytes(dir / "file", "x");
    EXPECT_THROW(save_plane(BinaryImage(2, 2, 1), dir / "file" / "m.png"), IoError);
}

TEST(Load, Deterministic) {
    const auto dir = testutil::scratch_dir("io_det");
    save_intensity(testutil::random_image(16, 16, 2), dir / "r.png");
    EXPECT_EQ(load_grayscale((dir / "r.png").string()).pixels, load_grayscale((dir / "r.png").string()).pixels);
}

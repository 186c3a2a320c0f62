/*
Copyright 2026 The Starlet Segmentation Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Image file I/O. PNG and JPEG go through libpng/libjpeg; binary PGM (P5) is
// handled directly. Every loader returns intensities normalized to [0, 1].

#ifndef STARLET_IO_HPP
#define STARLET_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "starlet/image.hpp"

namespace starlet {

class IoError : public std::runtime_error {
public:
    enum class Kind { Unreadable, UnsupportedFormat, EmptyImage, Corrupt, WriteFailed };

    IoError(Kind kind, const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), kind_(kind), path_(path) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& path() const noexcept { return path_; }

private:
    Kind kind_;
    std::string path_;
};

struct LoadedImage {
    GrayImage pixels;
    std::string source_path;
    int original_channels = 1;
};

struct GroundTruth {
    BinaryImage mask;
    std::string source_path;
};

// Rec. 601 luma weights for RGB -> gray.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

enum class OutputKind { D, R, COMP };

constexpr std::string_view to_string(OutputKind kind) noexcept {
    switch (kind) {
        case OutputKind::D: return "D";
        case OutputKind::R: return "R";
        case OutputKind::COMP: return "COMP";
    }
    return "";
}

/// File name without its final extension ("a.b.png" -> "a.b").
inline std::string file_stem(const std::filesystem::path& path) {
    return path.stem().string();
}

/// "{stem}_{kind}{level}.png" inside `dir`.
inline std::filesystem::path output_path(const std::filesystem::path& dir, std::string_view stem,
                                         OutputKind kind, int level) {
    if (level < 1) throw ValidationError("output_path: level must be >= 1");
    std::string name(stem);
    name += '_';
    name += to_string(kind);
    name += std::to_string(level);
    name += ".png";
    return dir / name;
}

struct OutputName {
    std::string stem;
    OutputKind kind;
    int level;
};

/// Inverse of output_path on the file name; nullopt for names it did not produce.
inline std::optional<OutputName> parse_output_name(const std::string& filename) {
    static const std::regex pattern(R"(^(.*)_(D|R|COMP)([1-9][0-9]*)\.png$)");
    std::smatch m;
    if (!std::regex_match(filename, m, pattern)) return std::nullopt;
    const std::string kind = m[2].str();
    const OutputKind k = kind == "D" ? OutputKind::D : kind == "R" ? OutputKind::R : OutputKind::COMP;
    return OutputName{m[1].str(), k, std::stoi(m[3].str())};
}

namespace detail {

inline std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoError::Kind::Unreadable, path, "cannot open file");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(IoError::Kind::Unreadable, path, "read error");
    return bytes;
}

// Interleaved samples straight from a decoder, before any normalization.
struct RawSamples {
    std::size_t width = 0;
    std::size_t height = 0;
    int channels = 0;  // 1 (gray) or 3 (RGB)
    double max_value = 255.0;
    std::vector<std::uint16_t> samples;
};

inline GrayImage to_gray(const RawSamples& raw) {
    GrayImage out(raw.width, raw.height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (raw.channels == 1) {
            out[i] = raw.samples[i] / raw.max_value;
        } else {
            const double r = raw.samples[3 * i];
            const double g = raw.samples[3 * i + 1];
            const double b = raw.samples[3 * i + 2];
            out[i] = (kLumaR * r + kLumaG * g + kLumaB * b) / raw.max_value;
        }
        out[i] = std::clamp(out[i], 0.0, 1.0);
    }
    return out;
}

// ---- PGM (P5) ----

inline RawSamples decode_pgm(const std::vector<unsigned char>& bytes, const std::string& path) {
    std::size_t pos = 2;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> long {
        skip_space();
        long v = 0;
        bool any = false;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos++] - '0');
            any = true;
            if (v > 1'000'000'000) break;
        }
        if (!any) throw IoError(IoError::Kind::Corrupt, path, "malformed PGM header");
        return v;
    };
    const long w = read_int();
    const long h = read_int();
    const long maxval = read_int();
    if (w == 0 || h == 0) throw IoError(IoError::Kind::EmptyImage, path, "image has zero width or height");
    if (maxval <= 0 || maxval > 65535) throw IoError(IoError::Kind::Corrupt, path, "invalid PGM maxval");
    ++pos;  // single whitespace before the raster

    RawSamples raw;
    raw.width = static_cast<std::size_t>(w);
    raw.height = static_cast<std::size_t>(h);
    raw.channels = 1;
    raw.max_value = static_cast<double>(maxval);
    const std::size_t n = raw.width * raw.height;
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (bytes.size() < pos + n * bytes_per) throw IoError(IoError::Kind::Corrupt, path, "truncated PGM raster");
    raw.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        raw.samples[i] = bytes_per == 1 ? bytes[pos + i]
                                        : static_cast<std::uint16_t>((bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1]);
    return raw;
}

// ---- PNG ----

struct PngReader {
    const std::vector<unsigned char>* bytes;
    std::size_t offset;
};

inline void png_read_from_memory(png_structp png, png_bytep out, png_size_t length) {
    auto* src = static_cast<PngReader*>(png_get_io_ptr(png));
    if (src->offset + length > src->bytes->size()) png_error(png, "unexpected end of PNG data");
    std::copy_n(src->bytes->data() + src->offset, length, out);
    src->offset += length;
}

inline void png_error_handler(png_structp png, png_const_charp message) {
    auto* msg = static_cast<std::string*>(png_get_error_ptr(png));
    if (msg) *msg = message;
    png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

inline RawSamples decode_png(const std::vector<unsigned char>& bytes, const std::string& path) {
    std::string error;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler, png_warning_handler);
    if (!png) throw IoError(IoError::Kind::Corrupt, path, "libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    PngReader reader{&bytes, 0};
    RawSamples raw;
    std::vector<png_bytep> rows;
    std::vector<unsigned char> buffer;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(IoError::Kind::Corrupt, path, "PNG decode failed: " + error);
    }
    png_set_read_fn(png, &reader, png_read_from_memory);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    const int out_depth = png_get_bit_depth(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    raw.width = width;
    raw.height = height;
    raw.channels = channels;
    raw.max_value = out_depth == 16 ? 65535.0 : 255.0;
    const std::size_t n = static_cast<std::size_t>(width) * height * static_cast<std::size_t>(channels);
    raw.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        raw.samples[i] = out_depth == 16 ? static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1])
                                         : buffer[i];
    return raw;
}

// ---- JPEG ----

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

inline RawSamples decode_jpeg(const std::vector<unsigned char>& bytes, const std::string& path) {
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    err.base.output_message = [](j_common_ptr) {};
    RawSamples raw;
    std::vector<unsigned char> buffer;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError(IoError::Kind::Corrupt, path, std::string("JPEG decode failed: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const std::size_t stride = static_cast<std::size_t>(cinfo.output_width) * cinfo.output_components;
    buffer.resize(stride * cinfo.output_height);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = buffer.data() + stride * cinfo.output_scanline;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    raw.width = cinfo.output_width;
    raw.height = cinfo.output_height;
    raw.channels = cinfo.output_components;
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);

    raw.max_value = 255.0;
    raw.samples.assign(buffer.begin(), buffer.end());
    return raw;
}

inline void encode_png(const std::string& path, std::size_t width, std::size_t height, int channels,
                       const std::vector<unsigned char>& samples) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError(IoError::Kind::WriteFailed, path, "cannot open for writing");
    std::unique_ptr<FILE, int (*)(FILE*)> file(fp, &std::fclose);

    std::string error;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler, png_warning_handler);
    if (!png) throw IoError(IoError::Kind::WriteFailed, path, "libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    std::vector<png_bytep> rows(height);

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError(IoError::Kind::WriteFailed, path, "PNG encode failed: " + error);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = width * static_cast<std::size_t>(channels);
    for (std::size_t y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(samples.data() + y * stride);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);

    if (std::fflush(fp) != 0) throw IoError(IoError::Kind::WriteFailed, path, "flush failed");
}

inline void ensure_parent(const std::filesystem::path& path) {
    const auto parent = path.parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError(IoError::Kind::WriteFailed, path.string(), "cannot create directory: " + ec.message());
}

inline std::vector<unsigned char> rescale_to_bytes(const GrayImage& plane) {
    std::vector<unsigned char> out(plane.size(), 0);
    if (plane.empty()) return out;
    const auto [lo, hi] = std::minmax_element(plane.begin(), plane.end());
    const double min = *lo;
    const double range = *hi - *lo;
    if (range <= 0.0) return out;
    for (std::size_t i = 0; i < plane.size(); ++i)
        out[i] = static_cast<unsigned char>(std::lround((plane[i] - min) / range * 255.0));
    return out;
}

inline std::vector<unsigned char> mask_to_bytes(const BinaryImage& mask) {
    std::vector<unsigned char> out(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 255 : 0;
    return out;
}

}  // namespace detail

/// Loads PNG (8/16-bit gray or RGB, palette, alpha), JPEG, or binary PGM. The
/// format is detected from the file signature, not the extension.
inline LoadedImage load_grayscale(const std::string& path) {
    const std::vector<unsigned char> bytes = detail::read_file(path);
    detail::RawSamples raw;
    static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (bytes.size() >= 8 && std::equal(kPngMagic, kPngMagic + 8, bytes.begin())) {
        raw = detail::decode_png(bytes, path);
    } else if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
        raw = detail::decode_jpeg(bytes, path);
    } else if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
        raw = detail::decode_pgm(bytes, path);
    } else {
        throw IoError(IoError::Kind::UnsupportedFormat, path, "unsupported image format (expected PNG, JPEG or PGM P5)");
    }
    if (raw.width == 0 || raw.height == 0)
        throw IoError(IoError::Kind::EmptyImage, path, "image has zero width or height");
    return LoadedImage{detail::to_gray(raw), path, raw.channels};
}

/// Gray values strictly above 0.5 are ROI. The midpoint cut absorbs lossy
/// compression noise around the two nominal tones.
inline GroundTruth load_ground_truth(const std::string& path) {
    LoadedImage loaded = load_grayscale(path);
    BinaryImage mask(loaded.pixels.width(), loaded.pixels.height());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = loaded.pixels[i] > 0.5 ? 1 : 0;
    return GroundTruth{std::move(mask), path};
}

/// Signed plane, affinely mapped so its [min, max] spans [0, 255]. A constant
/// plane is written as all zeros.
inline void save_plane(const GrayImage& plane, const std::filesystem::path& path) {
    detail::ensure_parent(path);
    detail::encode_png(path.string(), plane.width(), plane.height(), 1, detail::rescale_to_bytes(plane));
}

inline void save_plane(const BinaryImage& mask, const std::filesystem::path& path) {
    detail::ensure_parent(path);
    detail::encode_png(path.string(), mask.width(), mask.height(), 1, detail::mask_to_bytes(mask));
}

inline void save_plane(const RgbImage& image, const std::filesystem::path& path) {
    detail::ensure_parent(path);
    std::vector<unsigned char> samples;
    samples.reserve(image.size() * 3);
    for (const Rgb& px : image) samples.insert(samples.end(), px.begin(), px.end());
    detail::encode_png(path.string(), image.width(), image.height(), 3, samples);
}

/// Writes an 8-bit binary PGM from samples already in [0, 255].
inline void save_pgm(const Image<std::uint8_t>& image, const std::filesystem::path& path) {
    detail::ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(IoError::Kind::WriteFailed, path.string(), "cannot open for writing");
    out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels().data()), static_cast<std::streamsize>(image.size()));
    if (!out) throw IoError(IoError::Kind::WriteFailed, path.string(), "write failed");
}

/// Quantizes a [0, 1] intensity image to 8 bits (round to nearest).
inline Image<std::uint8_t> quantize8(const GrayImage& image) {
    Image<std::uint8_t> out(image.width(), image.height());
    for (std::size_t i = 0; i < image.size(); ++i)
        out[i] = static_cast<std::uint8_t>(std::lround(std::clamp(image[i], 0.0, 1.0) * 255.0));
    return out;
}

/// 8-bit gray PNG of a [0, 1] intensity image (no rescaling).
inline void save_intensity(const GrayImage& image, const std::filesystem::path& path) {
    detail::ensure_parent(path);
    const auto q = quantize8(image);
    detail::encode_png(path.string(), q.width(), q.height(), 1,
                       std::vector<unsigned char>(q.begin(), q.end()));
}

}  // namespace starlet

#endif  // STARLET_IO_HPP

// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/imaging.hpp"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace lumen {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) fail(path, "cannot open file");
    return f;
}

// Reads one whitespace-delimited header token, skipping leading whitespace.
std::string read_token(std::FILE* f) {
    std::string tok;
    int ch = std::fgetc(f);
    while (ch != EOF && std::isspace(ch)) ch = std::fgetc(f);
    while (ch != EOF && !std::isspace(ch)) {
        tok.push_back(static_cast<char>(ch));
        ch = std::fgetc(f);
    }
    return tok;
}

void byteswap_floats(std::vector<float>& v) {
    for (float& f : v) {
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        u = ((u & 0xFF000000u) >> 24) | ((u & 0x00FF0000u) >> 8) | ((u & 0x0000FF00u) << 8) |
            ((u & 0x000000FFu) << 24);
        std::memcpy(&f, &u, 4);
    }
}

}  // namespace

HdrImage HdrImage::zeros(int height, int width) {
    return {height, width, std::vector<float>(static_cast<std::size_t>(height) * width * 3, 0.0f)};
}

HdrImage HdrImage::constant(int height, int width, const Rgb& value) {
    HdrImage img = zeros(height, width);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) img.set(r, c, value);
    return img;
}

void HdrImage::validate() const {
    if (height <= 0 || width <= 0) throw std::invalid_argument("HdrImage: non-positive dims");
    if (data.size() != static_cast<std::size_t>(height) * width * 3)
        throw std::invalid_argument("HdrImage: payload size does not match dims");
    for (float v : data) {
        if (!std::isfinite(v)) throw std::invalid_argument("HdrImage: non-finite sample");
        if (v < 0.0f) throw std::invalid_argument("HdrImage: negative sample");
    }
}

LdrImage LdrImage::zeros(int height, int width) {
    return {height, width, std::vector<float>(static_cast<std::size_t>(height) * width * 3, 0.0f)};
}

void LdrImage::validate() const {
    if (height <= 0 || width <= 0) throw std::invalid_argument("LdrImage: non-positive dims");
    if (data.size() != static_cast<std::size_t>(height) * width * 3)
        throw std::invalid_argument("LdrImage: payload size does not match dims");
    for (float v : data)
        if (!(v >= 0.0f && v <= 1.0f)) throw std::invalid_argument("LdrImage: sample outside [0,1]");
}

BinaryMask BinaryMask::zeros(int height, int width) {
    return {height, width, std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width, 0)};
}

BinaryMask BinaryMask::ones(int height, int width) {
    return {height, width, std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width, 1)};
}

std::size_t BinaryMask::count() const {
    std::size_t n = 0;
    for (auto v : values) n += v != 0;
    return n;
}

MaskImage MaskImage::filled(int height, int width, MaskClass c) {
    return {height, width,
            std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width,
                                      static_cast<std::uint8_t>(c))};
}

BinaryMask MaskImage::channel(MaskClass c) const {
    BinaryMask m = BinaryMask::zeros(height, width);
    for (std::size_t i = 0; i < classes.size(); ++i)
        m.values[i] = classes[i] == static_cast<std::uint8_t>(c) ? 1 : 0;
    return m;
}

// ---------------------------------------------------------------------------
// PFM
// ---------------------------------------------------------------------------

PfmData read_pfm_raw(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");

    const std::string magic = read_token(f.get());
    int channels = 0;
    if (magic == "PF")
        channels = 3;
    else if (magic == "Pf")
        channels = 1;
    else
        fail(path, "malformed header: expected PF or Pf, got '" + magic + "'");

    int width = 0, height = 0;
    double scale = 0.0;
    try {
        width = std::stoi(read_token(f.get()));
        height = std::stoi(read_token(f.get()));
        scale = std::stod(read_token(f.get()));
    } catch (const std::exception&) {
        fail(path, "malformed header: bad dimensions or scale");
    }
    if (width <= 0 || height <= 0) fail(path, "malformed header: non-positive dimensions");
    // Reject allocation bombs before trusting the payload size.
    if (static_cast<long long>(width) * height > (1ll << 26))
        fail(path, "malformed header: image dimensions exceed the 64M pixel limit");
    if (scale == 0.0) fail(path, "malformed header: zero scale");

    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    std::vector<float> disk(count);
    if (std::fread(disk.data(), sizeof(float), count, f.get()) != count)
        fail(path, "truncated payload");

    const bool file_little = scale < 0.0;
    if (file_little != (std::endian::native == std::endian::little)) byteswap_floats(disk);

    // |scale| is a radiance scale factor; 1.0 is passed through untouched so
    // round trips stay bitwise exact.
    const float mag = static_cast<float>(std::abs(scale));
    if (mag != 1.0f)
        for (float& v : disk) v *= mag;

    // Rows are bottom-up on disk; flip to top-down.
    PfmData img{height, width, channels, std::vector<float>(count)};
    const std::size_t row = static_cast<std::size_t>(width) * channels;
    for (int r = 0; r < height; ++r)
        std::memcpy(img.samples.data() + static_cast<std::size_t>(r) * row,
                    disk.data() + static_cast<std::size_t>(height - 1 - r) * row,
                    row * sizeof(float));

    for (float v : img.samples)
        if (!std::isfinite(v)) fail(path, "non-finite sample");
    return img;
}

void write_pfm_raw(const PfmData& img, const std::filesystem::path& path) {
    if (img.channels != 1 && img.channels != 3)
        throw std::invalid_argument("write_pfm_raw: channels must be 1 or 3");
    FilePtr f = open_file(path, "wb");
    std::fprintf(f.get(), "%s\n%d %d\n-1.0\n", img.channels == 3 ? "PF" : "Pf", img.width,
                 img.height);

    std::vector<float> disk(img.samples);
    if (std::endian::native != std::endian::little) byteswap_floats(disk);

    const std::size_t row = static_cast<std::size_t>(img.width) * img.channels;
    for (int r = img.height - 1; r >= 0; --r) {
        if (std::fwrite(disk.data() + static_cast<std::size_t>(r) * row, sizeof(float), row,
                        f.get()) != row)
            fail(path, "write failure");
    }
    if (std::fflush(f.get()) != 0) fail(path, "write failure");
}

HdrImage read_pfm(const std::filesystem::path& path) {
    PfmData raw = read_pfm_raw(path);
    HdrImage img;
    img.height = raw.height;
    img.width = raw.width;
    if (raw.channels == 3) {
        img.data = std::move(raw.samples);
    } else {
        img.data.resize(raw.samples.size() * 3);
        for (std::size_t i = 0; i < raw.samples.size(); ++i)
            img.data[3 * i] = img.data[3 * i + 1] = img.data[3 * i + 2] = raw.samples[i];
    }
    for (float v : img.data)
        if (v < 0.0f) fail(path, "negative sample");
    return img;
}

void write_pfm(const HdrImage& img, const std::filesystem::path& path) {
    img.validate();
    write_pfm_raw(PfmData{img.height, img.width, 3, img.data}, path);
}

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

HdrImage ldr_to_linear(const LdrImage& img, double gamma) {
    img.validate();
    HdrImage out = HdrImage::zeros(img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<float>(std::pow(static_cast<double>(img.data[i]), gamma));
    return out;
}

LdrImage linear_to_ldr(const HdrImage& img, double gamma) {
    LdrImage out = LdrImage::zeros(img.height, img.width);
    const double inv = 1.0 / gamma;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double v = std::clamp(static_cast<double>(img.data[i]), 0.0, 1.0);
        out.data[i] = static_cast<float>(std::pow(v, inv));
    }
    return out;
}

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

namespace {

// Decodes any libpng-readable file to packed 8-bit RGB.
std::vector<std::uint8_t> decode_png_rgb8(const std::filesystem::path& path, int& width,
                                          int& height) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "libpng init failure");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "png decode failure");
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height * 3);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r)
        rows[static_cast<std::size_t>(r)] = pixels.data() + static_cast<std::size_t>(r) * width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return pixels;
}

void encode_png_rgb8(const std::vector<std::uint8_t>& pixels, int width, int height,
                     const std::filesystem::path& path) {
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail(path, "libpng init failure");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "png encode failure");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r)
        rows[static_cast<std::size_t>(r)] = const_cast<png_bytep>(
            pixels.data() + static_cast<std::size_t>(r) * width * 3);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

LdrImage read_png(const std::filesystem::path& path) {
    int w = 0, h = 0;
    const auto pixels = decode_png_rgb8(path, w, h);
    LdrImage img = LdrImage::zeros(h, w);
    for (std::size_t i = 0; i < pixels.size(); ++i)
        img.data[i] = static_cast<float>(pixels[i]) / 255.0f;
    return img;
}

void write_png(const LdrImage& img, const std::filesystem::path& path) {
    img.validate();
    std::vector<std::uint8_t> pixels(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i)
        pixels[i] = static_cast<std::uint8_t>(std::lround(img.data[i] * 255.0f));
    encode_png_rgb8(pixels, img.width, img.height, path);
}

MaskImage read_mask_png(const std::filesystem::path& path) {
    int w = 0, h = 0;
    const auto pixels = decode_png_rgb8(path, w, h);
    MaskImage mask = MaskImage::filled(h, w, MaskClass::Environment);
    for (std::size_t p = 0; p < static_cast<std::size_t>(w) * h; ++p) {
        const bool obj = pixels[3 * p] >= 128;
        const bool area = pixels[3 * p + 1] >= 128;
        const bool env = pixels[3 * p + 2] >= 128;
        if (static_cast<int>(obj) + static_cast<int>(area) + static_cast<int>(env) != 1)
            fail(path, "mask channels do not partition pixel " + std::to_string(p));
        mask.classes[p] = static_cast<std::uint8_t>(obj ? MaskClass::Object
                                                        : (area ? MaskClass::AreaLight
                                                                : MaskClass::Environment));
    }
    return mask;
}

void write_mask_png(const MaskImage& mask, const std::filesystem::path& path) {
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(mask.width) * mask.height * 3, 0);
    for (std::size_t p = 0; p < mask.classes.size(); ++p)
        pixels[3 * p + mask.classes[p]] = 255;
    encode_png_rgb8(pixels, mask.width, mask.height, path);
}

}  // namespace lumen

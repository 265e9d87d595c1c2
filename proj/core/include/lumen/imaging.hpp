// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lumen/vec.hpp"

namespace lumen {

/// Linear-radiance RGB image. Components are finite and nonnegative;
/// rows are stored top-down, channels interleaved.
struct HdrImage {
    int height = 0;
    int width = 0;
    std::vector<float> data;  // height * width * 3

    static HdrImage zeros(int height, int width);
    static HdrImage constant(int height, int width, const Rgb& value);

    Rgb at(int r, int c) const {
        const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set(int r, int c, const Rgb& v) {
        const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
        data[i] = static_cast<float>(v.r);
        data[i + 1] = static_cast<float>(v.g);
        data[i + 2] = static_cast<float>(v.b);
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }

    /// Throws std::invalid_argument when dims/payload disagree or a
    /// component is negative or non-finite.
    void validate() const;
};

/// Gamma-encoded RGB image with components in [0, 1].
struct LdrImage {
    int height = 0;
    int width = 0;
    std::vector<float> data;  // height * width * 3

    static LdrImage zeros(int height, int width);
    Rgb at(int r, int c) const {
        const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set(int r, int c, const Rgb& v) {
        const std::size_t i = (static_cast<std::size_t>(r) * width + c) * 3;
        data[i] = static_cast<float>(v.r);
        data[i + 1] = static_cast<float>(v.g);
        data[i + 2] = static_cast<float>(v.b);
    }
    void validate() const;
};

/// Single-channel 0/1 mask.
struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> values;

    static BinaryMask zeros(int height, int width);
    static BinaryMask ones(int height, int width);
    bool at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c] != 0; }
    void set(int r, int c, bool v) { values[static_cast<std::size_t>(r) * width + c] = v ? 1 : 0; }
    std::size_t count() const;
};

enum class MaskClass : std::uint8_t { Object = 0, AreaLight = 1, Environment = 2 };

/// Three-way segmentation: every pixel carries exactly one class. The
/// binary channel view of a class is an indicator mask.
struct MaskImage {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> classes;  // MaskClass per pixel

    static MaskImage filled(int height, int width, MaskClass c);
    MaskClass at(int r, int c) const {
        return static_cast<MaskClass>(classes[static_cast<std::size_t>(r) * width + c]);
    }
    void set(int r, int c, MaskClass v) {
        classes[static_cast<std::size_t>(r) * width + c] = static_cast<std::uint8_t>(v);
    }
    BinaryMask channel(MaskClass c) const;
};

// ---------------------------------------------------------------------------
// PFM I/O
//
// Header "PF\n<width> <height>\n<scale>\n" followed by 32-bit IEEE floats,
// rows bottom-up on disk. Negative scale marks little-endian data; writes
// always emit "-1.0". Row order is normalized to top-down on read.
// ---------------------------------------------------------------------------

/// Raw PFM payload: 1 (Pf) or 3 (PF) channels, rows already top-down,
/// samples finite but otherwise unconstrained (normal maps are signed).
struct PfmData {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<float> samples;
};

PfmData read_pfm_raw(const std::filesystem::path& path);
void write_pfm_raw(const PfmData& img, const std::filesystem::path& path);

/// Reads a PFM as linear radiance. Grayscale files are expanded to RGB.
/// Rejects non-finite and negative samples with a diagnostic.
HdrImage read_pfm(const std::filesystem::path& path);
void write_pfm(const HdrImage& img, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

/// Decode: linear = v^gamma per component.
HdrImage ldr_to_linear(const LdrImage& img, double gamma = 2.2);
/// Encode: v = clamp(linear, 0, 1)^(1/gamma) per component.
LdrImage linear_to_ldr(const HdrImage& img, double gamma = 2.2);

// ---------------------------------------------------------------------------
// PNG I/O (8-bit; gamma handled explicitly by the callers above)
// ---------------------------------------------------------------------------

LdrImage read_png(const std::filesystem::path& path);
void write_png(const LdrImage& img, const std::filesystem::path& path);

/// Mask PNGs store one 255-valued channel per pixel: R = object,
/// G = area light, B = environment. Reads validate the partition.
MaskImage read_mask_png(const std::filesystem::path& path);
void write_mask_png(const MaskImage& mask, const std::filesystem::path& path);

}  // namespace lumen

// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "lumen/imaging.hpp"
#include "lumen/rng.hpp"
#include "support/test_helpers.hpp"

using namespace lumen;

TEST_SUITE("imaging") {

TEST_CASE("pfm round trip is bitwise exact") {
    const auto dir = test::temp_dir("imaging");
    SplitMix64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const int h = 1 + static_cast<int>(rng.next_below(12));
        const int w = 1 + static_cast<int>(rng.next_below(12));
        HdrImage img = HdrImage::zeros(h, w);
        for (auto& v : img.data) v = static_cast<float>(rng.uniform(0.0, 1e4));
        const auto path = dir / "roundtrip.pfm";
        write_pfm(img, path);
        const HdrImage back = read_pfm(path);
        REQUIRE(back.height == h);
        REQUIRE(back.width == w);
        REQUIRE(std::memcmp(back.data.data(), img.data.data(), img.data.size() * 4) == 0);
    }
}

TEST_CASE("pfm header layout for a 1x1 zero image") {
    const auto path = test::temp_dir("imaging") / "one.pfm";
    write_pfm(HdrImage::zeros(1, 1), path);
    std::ifstream in(path, std::ios::binary);
    std::string magic, dims1, dims2, scale;
    in >> magic >> dims1 >> dims2 >> scale;
    CHECK(magic == "PF");
    CHECK(dims1 == "1");
    CHECK(dims2 == "1");
    CHECK(scale == "-1.0");
    in.get();  // newline before payload
    char payload[16];
    in.read(payload, 16);
    CHECK(in.gcount() == 12);
}

TEST_CASE("2x2 constant image payload") {
    const auto path = test::temp_dir("imaging") / "const.pfm";
    write_pfm(HdrImage::constant(2, 2, Rgb{1.0, 1.0, 1.0}), path);
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    std::vector<float> payload(13);
    in.read(reinterpret_cast<char*>(payload.data()), 13 * 4);
    CHECK(in.gcount() == 48);
    for (int i = 0; i < 12; ++i) CHECK(payload[static_cast<std::size_t>(i)] == 1.0f);
}

TEST_CASE("nan payload is rejected with a diagnostic") {
    const auto path = test::temp_dir("imaging") / "nan.pfm";
    {
        std::ofstream out(path, std::ios::binary);
        out << "PF\n1 1\n-1.0\n";
        const float nan = std::numeric_limits<float>::quiet_NaN();
        const float vals[3] = {nan, 0.0f, 0.0f};
        out.write(reinterpret_cast<const char*>(vals), 12);
    }
    CHECK_THROWS_WITH_AS(read_pfm(path), doctest::Contains("non-finite sample"),
                         std::runtime_error);
}

TEST_CASE("malformed header and truncated payload are rejected") {
    const auto dir = test::temp_dir("imaging");
    {
        std::ofstream out(dir / "bad_magic.pfm", std::ios::binary);
        out << "P6\n1 1\n-1.0\n";
    }
    CHECK_THROWS_AS(read_pfm(dir / "bad_magic.pfm"), std::runtime_error);
    {
        std::ofstream out(dir / "trunc.pfm", std::ios::binary);
        out << "PF\n2 2\n-1.0\n";
        const float v = 1.0f;
        out.write(reinterpret_cast<const char*>(&v), 4);
    }
    CHECK_THROWS_WITH_AS(read_pfm(dir / "trunc.pfm"), doctest::Contains("truncated"),
                         std::runtime_error);
    CHECK_THROWS_AS(read_pfm(dir / "missing.pfm"), std::runtime_error);
}

TEST_CASE("allocation-bomb headers are rejected before reading the payload") {
    const auto path = test::temp_dir("imaging") / "bomb.pfm";
    {
        std::ofstream out(path, std::ios::binary);
        out << "PF\n999999 999999\n-1.0\n";
    }
    CHECK_THROWS_WITH_AS(read_pfm(path), doctest::Contains("pixel limit"), std::runtime_error);
}

TEST_CASE("negative radiance is rejected for HdrImage reads") {
    const auto path = test::temp_dir("imaging") / "neg.pfm";
    {
        std::ofstream out(path, std::ios::binary);
        out << "PF\n1 1\n-1.0\n";
        const float vals[3] = {-1.0f, 0.0f, 0.0f};
        out.write(reinterpret_cast<const char*>(vals), 12);
    }
    CHECK_THROWS_WITH_AS(read_pfm(path), doctest::Contains("negative"), std::runtime_error);
    // The raw layer accepts signed data (normal maps).
    const PfmData raw = read_pfm_raw(path);
    CHECK(raw.samples[0] == -1.0f);
}

TEST_CASE("big-endian scale sign is honored on read") {
    const auto path = test::temp_dir("imaging") / "big.pfm";
    {
        std::ofstream out(path, std::ios::binary);
        out << "PF\n1 1\n1.0\n";
        const unsigned char big_one[12] = {0x3F, 0x80, 0, 0, 0x3F, 0x80, 0, 0, 0x3F, 0x80, 0, 0};
        out.write(reinterpret_cast<const char*>(big_one), 12);
    }
    const HdrImage img = read_pfm(path);
    CHECK(img.at(0, 0).r == doctest::Approx(1.0));
}

TEST_CASE("gamma decode endpoints and midpoint") {
    LdrImage img = LdrImage::zeros(1, 3);
    img.set(0, 0, Rgb{0.0, 0.0, 0.0});
    img.set(0, 1, Rgb{1.0, 1.0, 1.0});
    img.set(0, 2, Rgb{0.5, 0.5, 0.5});
    const HdrImage lin = ldr_to_linear(img);
    CHECK(lin.at(0, 0).r == 0.0);
    CHECK(lin.at(0, 1).r == doctest::Approx(1.0));
    // 0.5^2.2 from independent high-precision arithmetic.
    CHECK(lin.at(0, 2).r == doctest::Approx(0.21763764082403103).epsilon(1e-6));
}

TEST_CASE("gamma encode clamps HDR overflow") {
    HdrImage img = HdrImage::zeros(1, 2);
    img.set(0, 0, Rgb{1.0, 1.0, 1.0});
    img.set(0, 1, Rgb{4.0, 4.0, 4.0});
    const LdrImage ldr = linear_to_ldr(img);
    CHECK(ldr.at(0, 0).r == doctest::Approx(1.0));
    CHECK(ldr.at(0, 1).r == doctest::Approx(1.0));
}

TEST_CASE("gamma encode/decode are mutually inverse on [0,1]") {
    LdrImage img = LdrImage::zeros(1, 64);
    for (int c = 0; c < 64; ++c) {
        const float v = static_cast<float>(c) / 63.0f;
        img.set(0, c, Rgb{v, v, v});
    }
    const LdrImage back = linear_to_ldr(ldr_to_linear(img));
    for (int c = 0; c < 64; ++c)
        CHECK(back.at(0, c).r == doctest::Approx(img.at(0, c).r).epsilon(1e-6));
}

TEST_CASE("out-of-range ldr input is rejected") {
    LdrImage img = LdrImage::zeros(1, 1);
    img.data[0] = 1.5f;
    CHECK_THROWS_AS(ldr_to_linear(img), std::invalid_argument);
}

TEST_CASE("png round trip and mask partition") {
    const auto dir = test::temp_dir("imaging");
    LdrImage img = LdrImage::zeros(3, 5);
    SplitMix64 rng(11);
    for (auto& v : img.data)
        v = static_cast<float>(rng.next_below(256)) / 255.0f;
    write_png(img, dir / "img.png");
    const LdrImage back = read_png(dir / "img.png");
    REQUIRE(back.height == 3);
    REQUIRE(back.width == 5);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(back.data[i] == doctest::Approx(img.data[i]).epsilon(1e-6));

    MaskImage mask = MaskImage::filled(4, 4, MaskClass::Environment);
    mask.set(1, 1, MaskClass::Object);
    mask.set(2, 3, MaskClass::AreaLight);
    write_mask_png(mask, dir / "mask.png");
    const MaskImage mback = read_mask_png(dir / "mask.png");
    CHECK(mback.at(1, 1) == MaskClass::Object);
    CHECK(mback.at(2, 3) == MaskClass::AreaLight);
    CHECK(mback.at(0, 0) == MaskClass::Environment);

    // Channel view partitions every pixel.
    const BinaryMask obj = mback.channel(MaskClass::Object);
    const BinaryMask area = mback.channel(MaskClass::AreaLight);
    const BinaryMask env = mback.channel(MaskClass::Environment);
    for (std::size_t i = 0; i < obj.values.size(); ++i)
        CHECK(obj.values[i] + area.values[i] + env.values[i] == 1);
}

}  // TEST_SUITE

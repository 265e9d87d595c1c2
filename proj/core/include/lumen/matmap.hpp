// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <vector>

#include "lumen/rng.hpp"

namespace lumen {

/// One (Phong specular, microfacet roughness) correspondence harvested
/// from the diffuse-texture nearest-neighbor mapping.
struct PhongObservation {
    double exponent = 0.0;
    double intensity = 0.0;
    double roughness = 0.0;
};

/// Phong key: decile bin of the exponent and of the intensity.
struct PhongKey {
    int exponent_decile = 0;
    int intensity_decile = 0;
    auto operator<=>(const PhongKey&) const = default;
};

/// Empirical conditional distribution of microfacet roughness given a
/// Phong key: P(m | p) = N(p, m) / sum_c N(p, c). Roughness is histogrammed
/// into uniform bins over [0, 1]; Phong keys are deciles of the observed
/// exponent and intensity marginals.
struct ConditionalTable {
    int roughness_bins = 20;
    std::array<double, 11> exponent_edges{};
    std::array<double, 11> intensity_edges{};

    struct Row {
        std::vector<long> counts;
        std::vector<double> probabilities;
        long total = 0;
    };
    std::map<PhongKey, Row> rows;

    PhongKey key_for(double exponent, double intensity) const;
    /// Half-open support [lo, hi) of a roughness bin.
    std::pair<double, double> bin_edges(int bin) const;
};

ConditionalTable build_conditional(const std::vector<PhongObservation>& observations,
                                   int roughness_bins = 20);

/// Inverse-CDF draw of the bin followed by a uniform draw inside its
/// edges. Unknown keys raise an error naming the nearest populated keys.
double sample_conditional(const ConditionalTable& table, const PhongKey& key, SplitMix64& rng);

/// CSV rows "phong_exponent,phong_intensity,roughness"; a header line is
/// skipped when present.
std::vector<PhongObservation> read_observations_csv(const std::filesystem::path& path);

/// Key-value text serialization of the table.
void write_table_text(const ConditionalTable& table, const std::filesystem::path& path);
ConditionalTable read_table_text(const std::filesystem::path& path);

}  // namespace lumen

// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/matmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lumen {

namespace {

// Decile edges (11 cut points) of a sample; linear interpolation between
// order statistics.
std::array<double, 11> decile_edges(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::array<double, 11> edges{};
    const std::size_t n = values.size();
    for (int i = 0; i <= 10; ++i) {
        const double pos = (n - 1) * (i / 10.0);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = pos - static_cast<double>(lo);
        edges[static_cast<std::size_t>(i)] = values[lo] * (1.0 - frac) + values[hi] * frac;
    }
    return edges;
}

int decile_of(const std::array<double, 11>& edges, double v) {
    // Clamp outside values into the end bins.
    for (int i = 1; i < 10; ++i)
        if (v < edges[static_cast<std::size_t>(i)]) return i - 1;
    return 9;
}

}  // namespace

PhongKey ConditionalTable::key_for(double exponent, double intensity) const {
    return {decile_of(exponent_edges, exponent), decile_of(intensity_edges, intensity)};
}

std::pair<double, double> ConditionalTable::bin_edges(int bin) const {
    const double w = 1.0 / roughness_bins;
    return {bin * w, (bin + 1) * w};
}

ConditionalTable build_conditional(const std::vector<PhongObservation>& observations,
                                   int roughness_bins) {
    if (observations.empty())
        throw std::invalid_argument("build_conditional: empty observation list");
    if (roughness_bins <= 0)
        throw std::invalid_argument("build_conditional: roughness_bins must be positive");

    ConditionalTable table;
    table.roughness_bins = roughness_bins;
    std::vector<double> exps, ints;
    exps.reserve(observations.size());
    ints.reserve(observations.size());
    for (const auto& o : observations) {
        exps.push_back(o.exponent);
        ints.push_back(o.intensity);
    }
    table.exponent_edges = decile_edges(std::move(exps));
    table.intensity_edges = decile_edges(std::move(ints));

    for (const auto& o : observations) {
        if (!(o.roughness >= 0.0 && o.roughness <= 1.0))
            throw std::invalid_argument("build_conditional: roughness outside [0,1]");
        const PhongKey key = table.key_for(o.exponent, o.intensity);
        auto& row = table.rows[key];
        if (row.counts.empty()) row.counts.assign(static_cast<std::size_t>(roughness_bins), 0);
        const int bin = std::min(static_cast<int>(o.roughness * roughness_bins),
                                 roughness_bins - 1);
        ++row.counts[static_cast<std::size_t>(bin)];
        ++row.total;
    }
    for (auto& [key, row] : table.rows) {
        row.probabilities.resize(row.counts.size());
        for (std::size_t i = 0; i < row.counts.size(); ++i)
            row.probabilities[i] = static_cast<double>(row.counts[i]) / row.total;
    }
    return table;
}

double sample_conditional(const ConditionalTable& table, const PhongKey& key, SplitMix64& rng) {
    const auto it = table.rows.find(key);
    if (it == table.rows.end() || it->second.total == 0) {
        std::string msg = "sample_conditional: no observations for key (" +
                          std::to_string(key.exponent_decile) + ", " +
                          std::to_string(key.intensity_decile) + "); nearest populated keys:";
        std::vector<std::pair<int, PhongKey>> near;
        for (const auto& [k, row] : table.rows)
            near.push_back({std::abs(k.exponent_decile - key.exponent_decile) +
                                std::abs(k.intensity_decile - key.intensity_decile),
                            k});
        std::sort(near.begin(), near.end());
        for (std::size_t i = 0; i < std::min<std::size_t>(3, near.size()); ++i)
            msg += " (" + std::to_string(near[i].second.exponent_decile) + ", " +
                   std::to_string(near[i].second.intensity_decile) + ")";
        throw std::runtime_error(msg);
    }
    const ConditionalTable::Row& row = it->second;
    const double u = rng.next_double();
    double cdf = 0.0;
    int bin = static_cast<int>(row.probabilities.size()) - 1;
    for (std::size_t i = 0; i < row.probabilities.size(); ++i) {
        cdf += row.probabilities[i];
        if (u < cdf) {
            bin = static_cast<int>(i);
            break;
        }
    }
    const auto [lo, hi] = table.bin_edges(bin);
    return lo + rng.next_double() * (hi - lo);
}

std::vector<PhongObservation> read_observations_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open");
    std::vector<PhongObservation> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        PhongObservation o;
        if (!(ls >> o.exponent >> o.intensity >> o.roughness)) {
            if (out.empty()) continue;  // header
            throw std::runtime_error(path.string() + ": malformed CSV row: " + line);
        }
        out.push_back(o);
    }
    if (out.empty()) throw std::runtime_error(path.string() + ": no observations");
    return out;
}

void write_table_text(const ConditionalTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out.precision(17);
    out << "roughness_bins " << table.roughness_bins << '\n';
    out << "exponent_edges";
    for (double e : table.exponent_edges) out << ' ' << e;
    out << "\nintensity_edges";
    for (double e : table.intensity_edges) out << ' ' << e;
    out << '\n';
    for (const auto& [key, row] : table.rows) {
        out << "row " << key.exponent_decile << ' ' << key.intensity_decile;
        for (long c : row.counts) out << ' ' << c;
        out << '\n';
    }
    if (!out) throw std::runtime_error(path.string() + ": write failure");
}

ConditionalTable read_table_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open");
    ConditionalTable table;
    std::string tag;
    if (!(in >> tag >> table.roughness_bins) || tag != "roughness_bins")
        throw std::runtime_error(path.string() + ": malformed table header");
    in >> tag;
    for (auto& e : table.exponent_edges) in >> e;
    in >> tag;
    for (auto& e : table.intensity_edges) in >> e;
    while (in >> tag) {
        if (tag != "row") throw std::runtime_error(path.string() + ": malformed row tag");
        PhongKey key;
        in >> key.exponent_decile >> key.intensity_decile;
        ConditionalTable::Row row;
        row.counts.resize(static_cast<std::size_t>(table.roughness_bins));
        for (auto& c : row.counts) in >> c;
        if (!in) throw std::runtime_error(path.string() + ": truncated row");
        row.probabilities.resize(row.counts.size());
        for (long c : row.counts) row.total += c;
        for (std::size_t i = 0; i < row.counts.size(); ++i)
            row.probabilities[i] =
                row.total > 0 ? static_cast<double>(row.counts[i]) / row.total : 0.0;
        table.rows[key] = std::move(row);
    }
    return table;
}

}  // namespace lumen

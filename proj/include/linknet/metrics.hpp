#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linknet/dataset.hpp"
#include "linknet/network.hpp"

namespace linknet {

enum class ReciprocityMethod { Arc, Dyad };
enum class GiniVariant { Standard, SmallSampleCorrected };

// Structural cohesion of one network: how many nodes participate, how many
// of the possible arcs exist, and how symmetric they are.
struct CohesionReport {
    std::size_t n = 0;
    std::size_t inclusiveness_count = 0;
    double inclusiveness_ratio = 0.0;
    std::size_t ties = 0;
    std::optional<double> connectivity_gap;  // only versus a combined tie count
    double density = 0.0;
    double reciprocity = 0.0;
};

// `combined_ties`, when given, must be >= the network's tie count and
// yields connectivity_gap = (combined - ties) / combined. Density requires
// n >= 2. Reciprocity defaults to the arc method: reciprocated arcs / arcs.
CohesionReport cohesion(const InterlinkNetwork& net,
                        std::optional<std::size_t> combined_ties = std::nullopt,
                        ReciprocityMethod method = ReciprocityMethod::Arc);

struct DegreeTable {
    std::vector<std::string> nodes;
    std::vector<int> in_degree;
    std::vector<int> out_degree;
};

DegreeTable degree(const InterlinkNetwork& net);

// Unnormalized directed shortest-path betweenness (Brandes). Pairs with no
// connecting path contribute nothing.
std::vector<double> betweenness(const InterlinkNetwork& net);

// Mean-absolute-difference Gini: sum |xi - xj| / (2 n^2 mean). Zero for
// constant vectors (including all-zero); negative values are rejected.
double gini(std::span<const double> values, GiniVariant variant = GiniVariant::Standard);

// Product-moment correlation; throws UndefinedCorrelationError for
// constant input and ArgumentError for mismatched or short vectors.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson over mid-ranks (ties get averaged ranks).
double spearman(std::span<const double> x, std::span<const double> y);
std::vector<double> mid_ranks(std::span<const double> values);

struct DegreeCorrelations {
    double pearson_in = 0.0;   // in-degree vectors of the two networks
    double pearson_out = 0.0;  // out-degree vectors
};

DegreeCorrelations degree_correlations(const InterlinkNetwork& net_in,
                                       const InterlinkNetwork& net_out);

// 3x3 arc counts by (source sector, target sector) with marginals and
// per-organization row/column means. Means are always recomputed from
// totals.
struct SectorMatrix {
    std::array<std::array<std::size_t, 3>, 3> counts{};  // [source][target]
    std::array<std::size_t, 3> org_counts{};             // organizations per sector
    std::size_t excluded_seed_arcs = 0;

    std::size_t row_total(std::size_t sector) const;
    std::size_t column_total(std::size_t sector) const;
    std::size_t grand_total() const;
    std::size_t total_orgs() const;
    double row_mean(std::size_t sector) const;
    double column_mean(std::size_t sector) const;
    double grand_mean() const;
};

// Arcs counted by sector pair; with `exclude_seed_outlinks` the arcs whose
// source is the sample seed are left out, so the seed's own linking does
// not inflate its sector. Throws ConfigError listing any node the sample
// cannot classify.
SectorMatrix sector_matrix(const InterlinkNetwork& net, const Sample& sample,
                           bool exclude_seed_outlinks);

struct GiniReport {
    double in_degree = 0.0;
    double out_degree = 0.0;
};

// Gini of the in- and out-degree vectors of a network.
GiniReport degree_gini(const InterlinkNetwork& net,
                       GiniVariant variant = GiniVariant::Standard);

}  // namespace linknet

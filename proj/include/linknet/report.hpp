#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "linknet/metrics.hpp"

namespace linknet {

enum class TableStyle { Csv, Text };

// Round half away from zero to `places` decimals and render with a fixed
// number of digits ("0.06", "-0.13", "7.58").
std::string format_fixed(double value, int places = 2);

// A rendered table: rows of cells, first row is the header.
struct TableData {
    std::string title;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    std::string to_text() const;  // aligned columns
    std::string render(TableStyle style) const {
        return style == TableStyle::Csv ? to_csv() : to_text();
    }
};

// Table I shape: relationship taxonomy of the seed's link targets,
// "count (NN%)" cells over the non-seed members.
TableData relationship_table(const Sample& sample);

// Table II shape: one row per network with inclusiveness, ties, gap,
// density, reciprocity.
TableData cohesion_table(
    const std::vector<std::pair<std::string, CohesionReport>>& rows);

// Table III shape: Pearson correlation of the in/out degree vectors
// between the two data-set networks.
TableData correlation_table(const DegreeCorrelations& correlations,
                            double spearman_indeg_pages, double spearman_outdeg_pages,
                            bool spearman_available);

// Table IV shape: Gini of the degree vectors per network, plus the
// raw harvested per-member link counts, labeled separately.
TableData gini_table(const std::vector<std::pair<std::string, GiniReport>>& degree_rows,
                     const std::vector<std::pair<std::string, double>>& raw_rows);

// Table V shape: sector interconnection counts with row/column means.
TableData sector_table(const SectorMatrix& matrix);

// Table VI shape: top-k organizations by in-degree, out-degree and
// betweenness, side by side.
TableData centrality_table(const DegreeTable& degrees,
                           const std::vector<double>& betweenness_scores,
                           std::size_t top_k = 5);

}  // namespace linknet

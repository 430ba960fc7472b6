#include "linknet/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

namespace linknet {

std::string format_fixed(double value, int places) {
    double scale = std::pow(10.0, places);
    double scaled = value * scale;
    // Round half away from zero; printf alone would round half to even.
    double rounded = scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
    double out = rounded / scale;
    if (out == 0.0) out = 0.0;  // collapse negative zero
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", places, out);
    return buffer;
}

namespace {

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string percent_cell(std::size_t count, std::size_t total) {
    if (count == 0) return "";
    double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) /
                                        static_cast<double>(total);
    double rounded = std::floor(pct + 0.5);
    return std::to_string(count) + " (" +
           std::to_string(static_cast<long long>(rounded)) + "%)";
}

}  // namespace

std::string TableData::to_csv() const {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += csv_escape(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string TableData::to_text() const {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (row.size() > widths.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    if (!title.empty()) out += title + "\n";
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::string cell = row[i];
            cell.resize(widths[i], ' ');
            if (i > 0) line += "  ";
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

TableData relationship_table(const Sample& sample) {
    static const Relationship kOrder[] = {
        Relationship::Tenant,     Relationship::Information, Relationship::Support,
        Relationship::Partnership, Relationship::Membership,  Relationship::Incubator,
        Relationship::Other};

    std::map<Relationship, std::size_t> counts;
    std::size_t total = 0;
    for (const auto& member : sample.members) {
        if (member.key.value == sample.seed_key) continue;
        ++counts[member.relationship];
        ++total;
    }

    TableData table;
    table.title = "Link targets by type of relationship";
    table.rows.push_back({"relationship", "organisations"});
    table.rows.push_back({"Organisations", std::to_string(total)});
    for (Relationship rel : kOrder) {
        std::size_t count = counts.count(rel) ? counts[rel] : 0;
        table.rows.push_back({to_string(rel), percent_cell(count, total)});
    }
    return table;
}

TableData cohesion_table(
    const std::vector<std::pair<std::string, CohesionReport>>& rows) {
    TableData table;
    table.title = "Cohesion measures per network";
    table.rows.push_back({"network", "inclusiveness", "(%)", "ties", "connectivity_gap",
                          "density", "reciprocity"});
    for (const auto& [label, report] : rows) {
        table.rows.push_back(
            {label, std::to_string(report.inclusiveness_count),
             "(" + format_fixed(report.inclusiveness_ratio) + ")",
             std::to_string(report.ties),
             report.connectivity_gap ? format_fixed(*report.connectivity_gap) : "",
             format_fixed(report.density), format_fixed(report.reciprocity)});
    }
    return table;
}

TableData correlation_table(const DegreeCorrelations& correlations,
                            double spearman_indeg_pages, double spearman_outdeg_pages,
                            bool spearman_available) {
    TableData table;
    table.title = "Correlation between the in- and out-data networks";
    table.rows.push_back({"measure", "value"});
    table.rows.push_back({"pearson inlinks", format_fixed(correlations.pearson_in)});
    table.rows.push_back({"pearson outlinks", format_fixed(correlations.pearson_out)});
    if (spearman_available) {
        table.rows.push_back(
            {"spearman in-degree/webpages", format_fixed(spearman_indeg_pages)});
        table.rows.push_back(
            {"spearman out-degree/webpages", format_fixed(spearman_outdeg_pages)});
    }
    return table;
}

TableData gini_table(const std::vector<std::pair<std::string, GiniReport>>& degree_rows,
                     const std::vector<std::pair<std::string, double>>& raw_rows) {
    TableData table;
    table.title = "Gini coefficients";
    table.rows.push_back({"vector", "inlinks", "outlinks"});
    for (const auto& [label, report] : degree_rows)
        table.rows.push_back({label + " network degrees", format_fixed(report.in_degree),
                              format_fixed(report.out_degree)});
    for (const auto& [label, value] : raw_rows)
        table.rows.push_back({label, format_fixed(value), ""});
    return table;
}

TableData sector_table(const SectorMatrix& matrix) {
    static const char* kSectors[] = {"Industry", "Academia", "Government"};
    TableData table;
    table.title = "Arcs between institutional sectors";
    table.rows.push_back({"websites", "outlinks/inlinks", "Industry", "Academia",
                          "Government", "Total", "Mean"});
    for (std::size_t s = 0; s < 3; ++s) {
        table.rows.push_back({std::to_string(matrix.org_counts[s]), kSectors[s],
                              std::to_string(matrix.counts[s][0]),
                              std::to_string(matrix.counts[s][1]),
                              std::to_string(matrix.counts[s][2]),
                              std::to_string(matrix.row_total(s)),
                              format_fixed(matrix.row_mean(s))});
    }
    table.rows.push_back({std::to_string(matrix.total_orgs()), "Total",
                          std::to_string(matrix.column_total(0)),
                          std::to_string(matrix.column_total(1)),
                          std::to_string(matrix.column_total(2)),
                          std::to_string(matrix.grand_total()),
                          format_fixed(matrix.grand_mean())});
    table.rows.push_back({"", "Mean", format_fixed(matrix.column_mean(0)),
                          format_fixed(matrix.column_mean(1)),
                          format_fixed(matrix.column_mean(2)),
                          format_fixed(matrix.grand_mean()), ""});
    return table;
}

TableData centrality_table(const DegreeTable& degrees,
                           const std::vector<double>& betweenness_scores,
                           std::size_t top_k) {
    const std::size_t n = degrees.nodes.size();
    auto ranked = [&](auto value_of) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            auto va = value_of(a), vb = value_of(b);
            if (va != vb) return va > vb;
            return degrees.nodes[a] < degrees.nodes[b];
        });
        return order;
    };
    auto by_in = ranked([&](std::size_t i) { return static_cast<double>(degrees.in_degree[i]); });
    auto by_out =
        ranked([&](std::size_t i) { return static_cast<double>(degrees.out_degree[i]); });
    auto by_btw = ranked([&](std::size_t i) { return betweenness_scores[i]; });

    TableData table;
    table.title = "Centrality leaders";
    table.rows.push_back({"organisation", "in_degree", "organisation", "out_degree",
                          "organisation", "betweenness"});
    for (std::size_t k = 0; k < std::min(top_k, n); ++k) {
        table.rows.push_back({degrees.nodes[by_in[k]],
                              std::to_string(degrees.in_degree[by_in[k]]),
                              degrees.nodes[by_out[k]],
                              std::to_string(degrees.out_degree[by_out[k]]),
                              degrees.nodes[by_btw[k]],
                              format_fixed(betweenness_scores[by_btw[k]])});
    }
    return table;
}

}  // namespace linknet

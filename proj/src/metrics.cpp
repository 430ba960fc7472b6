#include "linknet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stack>

#include "linknet/errors.hpp"

namespace linknet {

CohesionReport cohesion(const InterlinkNetwork& net,
                        std::optional<std::size_t> combined_ties,
                        ReciprocityMethod method) {
    CohesionReport report;
    report.n = net.size();
    if (report.n < 2)
        throw ArgumentError("density undefined for networks with fewer than 2 nodes");

    report.ties = net.tie_count();
    report.inclusiveness_count = report.n - net.isolates().size();
    report.inclusiveness_ratio =
        static_cast<double>(report.inclusiveness_count) / static_cast<double>(report.n);
    report.density = static_cast<double>(report.ties) /
                     (static_cast<double>(report.n) * static_cast<double>(report.n - 1));

    if (combined_ties) {
        if (*combined_ties < report.ties)
            throw ArgumentError("combined tie count is smaller than the network's ties");
        report.connectivity_gap =
            *combined_ties == 0
                ? 0.0
                : static_cast<double>(*combined_ties - report.ties) /
                      static_cast<double>(*combined_ties);
    }

    const std::size_t n = report.n;
    std::size_t reciprocated = 0, mutual_dyads = 0, connected_dyads = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i < j) {
                bool ij = net.arc(i, j), ji = net.arc(j, i);
                if (ij || ji) ++connected_dyads;
                if (ij && ji) ++mutual_dyads;
            }
            if (net.arc(i, j) && net.arc(j, i)) ++reciprocated;
        }
    }
    if (method == ReciprocityMethod::Arc) {
        report.reciprocity =
            report.ties == 0 ? 0.0
                             : static_cast<double>(reciprocated) /
                                   static_cast<double>(report.ties);
    } else {
        report.reciprocity =
            connected_dyads == 0 ? 0.0
                                 : static_cast<double>(mutual_dyads) /
                                       static_cast<double>(connected_dyads);
    }
    return report;
}

DegreeTable degree(const InterlinkNetwork& net) {
    const std::size_t n = net.size();
    DegreeTable table;
    table.nodes = net.nodes();
    table.in_degree.assign(n, 0);
    table.out_degree.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!net.arc(i, j)) continue;
            ++table.out_degree[i];
            ++table.in_degree[j];
        }
    }
    return table;
}

// Brandes (2001), directed and unweighted, without normalization.
std::vector<double> betweenness(const InterlinkNetwork& net) {
    const std::size_t n = net.size();
    std::vector<double> score(n, 0.0);

    std::vector<std::vector<std::size_t>> successors(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (net.arc(i, j)) successors[i].push_back(j);

    for (std::size_t s = 0; s < n; ++s) {
        std::stack<std::size_t> order;
        std::vector<std::vector<std::size_t>> predecessors(n);
        std::vector<double> sigma(n, 0.0);
        std::vector<int> dist(n, -1);
        sigma[s] = 1.0;
        dist[s] = 0;

        std::queue<std::size_t> frontier;
        frontier.push(s);
        while (!frontier.empty()) {
            std::size_t v = frontier.front();
            frontier.pop();
            order.push(v);
            for (std::size_t w : successors[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    frontier.push(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    predecessors[w].push_back(v);
                }
            }
        }

        std::vector<double> delta(n, 0.0);
        while (!order.empty()) {
            std::size_t w = order.top();
            order.pop();
            for (std::size_t v : predecessors[w])
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) score[w] += delta[w];
        }
    }
    return score;
}

double gini(std::span<const double> values, GiniVariant variant) {
    if (values.empty()) throw ArgumentError("gini requires at least one value");
    for (double v : values)
        if (v < 0.0) throw ArgumentError("gini input must be non-negative");

    const std::size_t n = values.size();
    double total = std::accumulate(values.begin(), values.end(), 0.0);
    if (total == 0.0) return 0.0;  // constant zero vector: total equality

    // Sorted prefix form of sum |xi - xj| / (2 n^2 mean).
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        weighted += static_cast<double>(i + 1) * sorted[i];
    double g = (2.0 * weighted - (static_cast<double>(n) + 1.0) * total) /
               (static_cast<double>(n) * total);
    if (variant == GiniVariant::SmallSampleCorrected && n > 1)
        g *= static_cast<double>(n) / static_cast<double>(n - 1);
    return g;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("pearson requires equal-length vectors");
    if (x.size() < 2) throw ArgumentError("pearson requires at least 2 observations");

    const double n = static_cast<double>(x.size());
    double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double covariance = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mean_x, dy = y[i] - mean_y;
        covariance += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0)
        throw UndefinedCorrelationError("correlation undefined for constant vectors");
    return covariance / std::sqrt(var_x * var_y);
}

std::vector<double> mid_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("spearman requires equal-length vectors");
    std::vector<double> rx = mid_ranks(x);
    std::vector<double> ry = mid_ranks(y);
    return pearson(rx, ry);
}

DegreeCorrelations degree_correlations(const InterlinkNetwork& net_in,
                                       const InterlinkNetwork& net_out) {
    if (net_in.nodes() != net_out.nodes())
        throw StructuralError("degree correlations require identical node lists");
    DegreeTable a = degree(net_in);
    DegreeTable b = degree(net_out);
    auto to_double = [](const std::vector<int>& v) {
        return std::vector<double>(v.begin(), v.end());
    };
    DegreeCorrelations out;
    auto in_a = to_double(a.in_degree), in_b = to_double(b.in_degree);
    auto out_a = to_double(a.out_degree), out_b = to_double(b.out_degree);
    out.pearson_in = pearson(in_a, in_b);
    out.pearson_out = pearson(out_a, out_b);
    return out;
}

std::size_t SectorMatrix::row_total(std::size_t sector) const {
    return counts[sector][0] + counts[sector][1] + counts[sector][2];
}

std::size_t SectorMatrix::column_total(std::size_t sector) const {
    return counts[0][sector] + counts[1][sector] + counts[2][sector];
}

std::size_t SectorMatrix::grand_total() const {
    return row_total(0) + row_total(1) + row_total(2);
}

std::size_t SectorMatrix::total_orgs() const {
    return org_counts[0] + org_counts[1] + org_counts[2];
}

double SectorMatrix::row_mean(std::size_t sector) const {
    return org_counts[sector] == 0
               ? 0.0
               : static_cast<double>(row_total(sector)) /
                     static_cast<double>(org_counts[sector]);
}

double SectorMatrix::column_mean(std::size_t sector) const {
    return org_counts[sector] == 0
               ? 0.0
               : static_cast<double>(column_total(sector)) /
                     static_cast<double>(org_counts[sector]);
}

double SectorMatrix::grand_mean() const {
    return total_orgs() == 0
               ? 0.0
               : static_cast<double>(grand_total()) / static_cast<double>(total_orgs());
}

SectorMatrix sector_matrix(const InterlinkNetwork& net, const Sample& sample,
                           bool exclude_seed_outlinks) {
    const std::size_t n = net.size();
    std::vector<std::size_t> sector_of(n);
    std::vector<std::string> unclassified;
    for (std::size_t i = 0; i < n; ++i) {
        const Organization* org = sample.find(net.nodes()[i]);
        if (org == nullptr) {
            unclassified.push_back(net.nodes()[i]);
            continue;
        }
        sector_of[i] = static_cast<std::size_t>(org->sector);
    }
    if (!unclassified.empty()) {
        std::string joined;
        for (const auto& key : unclassified) {
            if (!joined.empty()) joined += ", ";
            joined += key;
        }
        throw ConfigError("sample does not classify: " + joined);
    }

    SectorMatrix matrix;
    for (const auto& org : sample.members)
        ++matrix.org_counts[static_cast<std::size_t>(org.sector)];

    std::size_t seed = net.contains(sample.seed_key) ? net.index_of(sample.seed_key) : n;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!net.arc(i, j)) continue;
            if (exclude_seed_outlinks && i == seed) {
                ++matrix.excluded_seed_arcs;
                continue;
            }
            ++matrix.counts[sector_of[i]][sector_of[j]];
        }
    }
    return matrix;
}

GiniReport degree_gini(const InterlinkNetwork& net, GiniVariant variant) {
    DegreeTable table = degree(net);
    std::vector<double> in(table.in_degree.begin(), table.in_degree.end());
    std::vector<double> out(table.out_degree.begin(), table.out_degree.end());
    GiniReport report;
    report.in_degree = in.empty() ? 0.0 : gini(in, variant);
    report.out_degree = out.empty() ? 0.0 : gini(out, variant);
    return report;
}

}  // namespace linknet

#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// here must stay implementation-independent: brute-force enumeration and
// textbook formulas only.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "linknet/network.hpp"
#include "linknet/url.hpp"

namespace testutil {

namespace fs = std::filesystem;

inline std::string fixture_dir() { return LINKNET_FIXTURE_DIR; }
inline std::string data_dir() { return LINKNET_DATA_DIR; }

inline const linknet::PublicSuffixList& bundled_psl() {
    static linknet::PublicSuffixList psl =
        linknet::PublicSuffixList::from_file(data_dir() + "/public_suffix_list.dat");
    return psl;
}

// RAII temporary directory under the system temp root.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("linknet-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

  private:
    fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return content;
}

// Writes `http://<host><path>` into a corpus directory as the fetcher
// expects it.
inline void write_corpus_page(const fs::path& corpus, const std::string& host,
                              const std::string& path, const std::string& html) {
    write_file(corpus / host / (linknet::percent_encode(path) + ".html"), html);
}

inline std::string page_with_links(const std::vector<std::string>& hrefs,
                                   const std::string& title = "page") {
    std::string html = "<html><head><title>" + title + "</title></head><body>";
    for (const auto& href : hrefs) html += "<a href=\"" + href + "\">link</a> ";
    html += "</body></html>";
    return html;
}

// ---------------------------------------------------------------------------
// Oracles

// Mean-absolute-difference Gini, the literal double loop.
inline double gini_oracle(const std::vector<double>& values) {
    const std::size_t n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    if (sum == 0.0) return 0.0;
    double mean = sum / static_cast<double>(n);
    double diff = 0.0;
    for (double a : values)
        for (double b : values) diff += std::fabs(a - b);
    return diff / (2.0 * static_cast<double>(n) * static_cast<double>(n) * mean);
}

// Textbook product-moment correlation via raw sums.
inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    return (n * sxy - sx * sy) /
           std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Mid-ranks by counting: rank = #smaller + (#equal + 1) / 2.
inline std::vector<double> ranks_oracle(const std::vector<double>& values) {
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::size_t smaller = 0, equal = 0;
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (values[j] < values[i]) ++smaller;
            if (values[j] == values[i]) ++equal;
        }
        ranks[i] = static_cast<double>(smaller) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
    return ranks;
}

inline double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_oracle(ranks_oracle(x), ranks_oracle(y));
}

// Exhaustive directed betweenness: enumerate every simple path per ordered
// pair, keep the shortest ones, accumulate pass-through fractions.
class BetweennessOracle {
  public:
    explicit BetweennessOracle(const linknet::InterlinkNetwork& net) : net_(net) {}

    std::vector<double> compute() {
        const std::size_t n = net_.size();
        std::vector<double> score(n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t t = 0; t < n; ++t) {
                if (s == t) continue;
                paths_.clear();
                best_ = n + 1;
                std::vector<std::size_t> path{s};
                std::vector<bool> used(n, false);
                used[s] = true;
                explore(s, t, path, used);
                if (paths_.empty()) continue;
                double sigma = static_cast<double>(paths_.size());
                std::vector<double> through(n, 0.0);
                for (const auto& p : paths_)
                    for (std::size_t k = 1; k + 1 < p.size(); ++k) through[p[k]] += 1.0;
                for (std::size_t v = 0; v < n; ++v) score[v] += through[v] / sigma;
            }
        }
        return score;
    }

  private:
    void explore(std::size_t at, std::size_t goal, std::vector<std::size_t>& path,
                 std::vector<bool>& used) {
        if (path.size() > best_) return;
        if (at == goal) {
            if (path.size() < best_) {
                best_ = path.size();
                paths_.clear();
            }
            if (path.size() == best_) paths_.push_back(path);
            return;
        }
        for (std::size_t next = 0; next < net_.size(); ++next) {
            if (used[next] || !net_.arc(at, next)) continue;
            used[next] = true;
            path.push_back(next);
            explore(next, goal, path, used);
            path.pop_back();
            used[next] = false;
        }
    }

    const linknet::InterlinkNetwork& net_;
    std::vector<std::vector<std::size_t>> paths_;
    std::size_t best_ = 0;
};

// Deterministic random digraph over nodes "n00".."nXX".
inline linknet::InterlinkNetwork random_network(std::mt19937& rng, std::size_t n,
                                                double arc_probability,
                                                linknet::Provenance provenance =
                                                    linknet::Provenance::Combined) {
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n; ++i) {
        std::string label = std::to_string(i);
        if (label.size() < 2) label = "0" + label;
        nodes.push_back("n" + label + ".example");
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<std::string, std::string>> arcs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coin(rng) < arc_probability) arcs.emplace_back(nodes[i], nodes[j]);
    return linknet::make_network(nodes, arcs, provenance,
                                 nodes.empty() ? "" : nodes.front());
}

// Fixture generator for cohesion rows: `n` nodes, an in-network with
// `in_arcs` arcs spanning the first `in_span` nodes, an out-network with
// `out_arcs` arcs spanning all nodes, and a union of exactly `union_arcs`.
struct CohesionFixture {
    linknet::InterlinkNetwork in_net;
    linknet::InterlinkNetwork out_net;
};

inline CohesionFixture cohesion_fixture(std::size_t n, std::size_t in_arcs,
                                        std::size_t out_arcs, std::size_t union_arcs,
                                        std::size_t in_span) {
    const std::size_t overlap = in_arcs + out_arcs - union_arcs;

    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n; ++i) {
        std::string label = std::to_string(i);
        while (label.size() < 3) label = "0" + label;
        nodes.push_back("org" + label + ".example");
    }

    std::set<std::pair<std::size_t, std::size_t>> in_set;
    // A cycle over the spanned nodes guarantees none of them is isolated.
    for (std::size_t i = 0; i < in_span; ++i) in_set.emplace(i, (i + 1) % in_span);
    for (std::size_t i = 0; i < in_span && in_set.size() < in_arcs; ++i)
        for (std::size_t j = 0; j < in_span && in_set.size() < in_arcs; ++j)
            if (i != j) in_set.emplace(i, j);

    std::set<std::pair<std::size_t, std::size_t>> out_set;
    std::size_t taken = 0;
    for (const auto& arc : in_set) {
        if (taken == overlap) break;
        out_set.insert(arc);
        ++taken;
    }
    // Cover the nodes the in-network leaves isolated.
    for (std::size_t k = in_span; k < n; ++k) out_set.emplace(0, k);
    for (std::size_t i = 0; i < n && out_set.size() < out_arcs; ++i)
        for (std::size_t j = 0; j < n && out_set.size() < out_arcs; ++j)
            if (i != j && !in_set.count({i, j})) out_set.emplace(i, j);

    auto to_arcs = [&](const std::set<std::pair<std::size_t, std::size_t>>& arcs) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [i, j] : arcs) out.emplace_back(nodes[i], nodes[j]);
        return out;
    };
    CohesionFixture fixture;
    fixture.in_net = linknet::make_network(nodes, to_arcs(in_set),
                                           linknet::Provenance::InData, nodes.front());
    fixture.out_net = linknet::make_network(nodes, to_arcs(out_set),
                                            linknet::Provenance::OutData, nodes.front());
    return fixture;
}

// Fixture for seed pruning: `n` nodes, `total_arcs` arcs, the seed links to
// every other node, and pruning leaves `kept_nodes` nodes / `kept_arcs`
// arcs.
inline linknet::InterlinkNetwork pruning_fixture(std::size_t n, std::size_t total_arcs,
                                                 std::size_t kept_nodes,
                                                 std::size_t kept_arcs) {
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n; ++i) {
        std::string label = std::to_string(i);
        while (label.size() < 3) label = "0" + label;
        nodes.push_back("org" + label + ".example");
    }
    // The seed links everyone; arcs that survive pruning live on nodes
    // 1..kept_nodes-1 (plus arcs into the seed), while nodes
    // kept_nodes..n-1 only ever receive the seed arc.
    std::set<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t k = 1; k < n; ++k) arcs.emplace(0, k);
    std::size_t surviving = 0;
    for (std::size_t i = 1; i < kept_nodes && surviving < kept_arcs; ++i) {
        std::size_t j = i + 1 < kept_nodes ? i + 1 : 1;
        if (arcs.emplace(i, j).second) ++surviving;
    }
    for (std::size_t i = 1; i < kept_nodes && surviving < kept_arcs; ++i) {
        if (arcs.emplace(i, 0).second) ++surviving;  // links received by the seed
    }
    for (std::size_t i = 1; i < kept_nodes && surviving < kept_arcs; ++i)
        for (std::size_t j = 1; j < kept_nodes && surviving < kept_arcs; ++j)
            if (i != j && arcs.emplace(i, j).second) ++surviving;

    if (arcs.size() != total_arcs || surviving != kept_arcs)
        throw std::logic_error("pruning fixture shape mismatch");

    std::vector<std::pair<std::string, std::string>> arc_list;
    for (const auto& [i, j] : arcs) arc_list.emplace_back(nodes[i], nodes[j]);
    return linknet::make_network(nodes, arc_list, linknet::Provenance::Combined,
                                 nodes.front());
}

}  // namespace testutil

#include "linknet/network.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "linknet/errors.hpp"

namespace linknet {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::InData: return "in";
        case Provenance::OutData: return "out";
        case Provenance::Combined: return "both";
    }
    return "?";
}

InterlinkNetwork::InterlinkNetwork(std::vector<std::string> nodes, Provenance provenance,
                                   std::string seed_key)
    : nodes_(std::move(nodes)), provenance_(provenance), seed_(std::move(seed_key)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    adjacency_.assign(nodes_.size() * nodes_.size(), 0);
}

std::size_t InterlinkNetwork::index_of(const std::string& key) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), key);
    if (it == nodes_.end() || *it != key)
        throw StructuralError("node not in network: " + key);
    return static_cast<std::size_t>(it - nodes_.begin());
}

bool InterlinkNetwork::contains(const std::string& key) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), key);
}

bool InterlinkNetwork::arc(const std::string& source, const std::string& target) const {
    return arc(index_of(source), index_of(target));
}

void InterlinkNetwork::set_arc(std::size_t source, std::size_t target) {
    if (source == target) return;  // diagonal stays false
    adjacency_[source * nodes_.size() + target] = 1;
}

void InterlinkNetwork::set_arc(const std::string& source, const std::string& target) {
    set_arc(index_of(source), index_of(target));
}

std::size_t InterlinkNetwork::tie_count() const {
    std::size_t ties = 0;
    for (auto cell : adjacency_) ties += cell;
    return ties;
}

std::vector<std::pair<std::string, std::string>> InterlinkNetwork::arcs() const {
    std::vector<std::pair<std::string, std::string>> out;
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (arc(i, j)) out.emplace_back(nodes_[i], nodes_[j]);
    return out;
}

std::vector<std::string> InterlinkNetwork::isolates() const {
    const std::size_t n = nodes_.size();
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        bool connected = false;
        for (std::size_t j = 0; j < n && !connected; ++j)
            if (arc(i, j) || arc(j, i)) connected = true;
        if (!connected) out.push_back(nodes_[i]);
    }
    return out;
}

InterlinkNetwork interlink(const LinkDataset& dataset, const Sample& sample) {
    Provenance provenance = dataset.direction == Direction::Inlinks ? Provenance::InData
                                                                    : Provenance::OutData;
    InterlinkNetwork net(sample.keys(), provenance, sample.seed_key);
    for (const auto& record : dataset.records) {
        if (record.source == record.target) continue;
        if (!net.contains(record.source) || !net.contains(record.target)) continue;
        net.set_arc(record.source, record.target);
    }
    return net;
}

InterlinkNetwork combine(const InterlinkNetwork& in_net, const InterlinkNetwork& out_net) {
    if (in_net.nodes() != out_net.nodes())
        throw StructuralError("cannot combine networks over different node lists");
    InterlinkNetwork net(in_net.nodes(), Provenance::Combined, in_net.seed_key());
    const std::size_t n = net.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (in_net.arc(i, j) || out_net.arc(i, j)) net.set_arc(i, j);
    return net;
}

InterlinkNetwork prune_seed_outlinks(const InterlinkNetwork& net, const std::string& seed_key) {
    std::size_t seed = net.index_of(seed_key);  // throws when absent
    const std::size_t n = net.size();

    // Degrees with seed-out arcs removed decide which nodes survive.
    std::vector<std::size_t> degree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!net.arc(i, j) || i == seed) continue;
            ++degree[i];
            ++degree[j];
        }
    }

    std::vector<std::string> kept;
    for (std::size_t i = 0; i < n; ++i)
        if (degree[i] > 0 || i == seed) kept.push_back(net.nodes()[i]);

    InterlinkNetwork pruned(kept, net.provenance(), seed_key);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == seed) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (!net.arc(i, j)) continue;
            pruned.set_arc(net.nodes()[i], net.nodes()[j]);
        }
    }
    return pruned;
}

std::vector<std::pair<std::string, std::string>> mutual_arcs(const InterlinkNetwork& net) {
    std::vector<std::pair<std::string, std::string>> out;
    const std::size_t n = net.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (net.arc(i, j) && net.arc(j, i)) out.emplace_back(net.nodes()[i], net.nodes()[j]);
    return out;
}

InterlinkNetwork make_network(std::vector<std::string> nodes,
                              const std::vector<std::pair<std::string, std::string>>& arcs,
                              Provenance provenance, std::string seed_key) {
    InterlinkNetwork net(std::move(nodes), provenance, std::move(seed_key));
    for (const auto& [source, target] : arcs) net.set_arc(source, target);
    return net;
}

void save_matrix(const InterlinkNetwork& net, const std::string& path) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write matrix: " + path);
    out << "key";
    for (const auto& node : net.nodes()) out << '\t' << node;
    out << '\n';
    const std::size_t n = net.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << net.nodes()[i];
        for (std::size_t j = 0; j < n; ++j) out << '\t' << (net.arc(i, j) ? '1' : '0');
        out << '\n';
    }
}

InterlinkNetwork load_matrix(const std::string& path, Provenance provenance,
                             std::string seed_key) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read matrix: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty matrix file: " + path);

    auto split = [](const std::string& text) {
        std::vector<std::string> cells;
        std::string cell;
        for (char c : text) {
            if (c == '\t') {
                cells.push_back(std::move(cell));
                cell.clear();
            } else if (c != '\r') {
                cell += c;
            }
        }
        cells.push_back(std::move(cell));
        return cells;
    };

    auto header = split(line);
    std::vector<std::string> nodes(header.begin() + 1, header.end());
    InterlinkNetwork net(nodes, provenance, std::move(seed_key));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != nodes.size() + 1)
            throw Error("matrix row width mismatch in " + path);
        for (std::size_t j = 1; j < cells.size(); ++j)
            if (cells[j] == "1") net.set_arc(cells[0], nodes[j - 1]);
    }
    return net;
}

}  // namespace linknet

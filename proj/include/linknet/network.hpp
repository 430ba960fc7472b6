#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linknet/dataset.hpp"

namespace linknet {

enum class Provenance { InData, OutData, Combined };

const char* to_string(Provenance p);

// Dichotomized directed adjacency over the sample's site keys. Nodes are
// kept in lexicographic order so matrices and exports are byte-stable;
// the diagonal is always false.
class InterlinkNetwork {
  public:
    InterlinkNetwork() = default;
    InterlinkNetwork(std::vector<std::string> nodes, Provenance provenance,
                     std::string seed_key);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    Provenance provenance() const { return provenance_; }
    const std::string& seed_key() const { return seed_; }

    // Index of a node key; throws StructuralError for unknown keys.
    std::size_t index_of(const std::string& key) const;
    bool contains(const std::string& key) const;

    bool arc(std::size_t source, std::size_t target) const {
        return adjacency_[source * nodes_.size() + target] != 0;
    }
    bool arc(const std::string& source, const std::string& target) const;
    // Self-arcs are ignored (the diagonal stays false).
    void set_arc(std::size_t source, std::size_t target);
    void set_arc(const std::string& source, const std::string& target);

    std::size_t tie_count() const;
    std::vector<std::pair<std::string, std::string>> arcs() const;

    // Nodes with zero total degree.
    std::vector<std::string> isolates() const;

  private:
    std::vector<std::string> nodes_;
    std::vector<std::uint8_t> adjacency_;
    Provenance provenance_ = Provenance::Combined;
    std::string seed_;
};

// Figure-style construction: keep only records with both endpoints in the
// sample, dichotomize (any count >= 1 becomes an arc), drop self-links.
InterlinkNetwork interlink(const LinkDataset& dataset, const Sample& sample);

// Elementwise boolean OR; node lists must match exactly.
InterlinkNetwork combine(const InterlinkNetwork& in_net, const InterlinkNetwork& out_net);

// Remove every arc whose source is the seed, then drop nodes isolated by
// that removal; the seed itself is retained even when isolated.
InterlinkNetwork prune_seed_outlinks(const InterlinkNetwork& net, const std::string& seed_key);

// Unordered pairs {s,t} linked in both directions, each pair reported once
// with its keys in lexicographic order.
std::vector<std::pair<std::string, std::string>> mutual_arcs(const InterlinkNetwork& net);

// Convenience builder for tests and fixtures.
InterlinkNetwork make_network(std::vector<std::string> nodes,
                              const std::vector<std::pair<std::string, std::string>>& arcs,
                              Provenance provenance = Provenance::Combined,
                              std::string seed_key = {});

// TSV adjacency with a header row/column of site keys and 0/1 cells.
void save_matrix(const InterlinkNetwork& net, const std::string& path);
InterlinkNetwork load_matrix(const std::string& path, Provenance provenance,
                             std::string seed_key = {});

}  // namespace linknet

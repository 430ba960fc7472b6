#pragma once

#include <string>
#include <vector>

#include "linknet/metrics.hpp"
#include "linknet/network.hpp"

namespace linknet {

enum class GraphFormat { Gexf, Dot, Edgelist };

GraphFormat graph_format_from_string(const std::string& s);

// Attribute-rich, byte-stable graph serializations for external viewers.
// Nodes carry name, sector, relationship, in/out-degree and betweenness;
// edges carry a boolean mutuality attribute (DOT renders mutual edges with
// a heavier pen).
std::string export_graph(const InterlinkNetwork& net, const Sample& sample,
                         const DegreeTable& degrees,
                         const std::vector<double>& betweenness_scores,
                         GraphFormat format);

void export_graph_file(const InterlinkNetwork& net, const Sample& sample,
                       const DegreeTable& degrees,
                       const std::vector<double>& betweenness_scores,
                       GraphFormat format, const std::string& path);

// Reads an edgelist produced by export_graph back into a network; "#node"
// comment lines preserve isolated nodes, so the round trip is lossless.
InterlinkNetwork import_edgelist(const std::string& path, Provenance provenance,
                                 std::string seed_key = {});

}  // namespace linknet

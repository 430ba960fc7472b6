#include "linknet/graph_export.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "linknet/errors.hpp"
#include "linknet/report.hpp"

namespace linknet {

GraphFormat graph_format_from_string(const std::string& s) {
    if (s == "gexf") return GraphFormat::Gexf;
    if (s == "dot") return GraphFormat::Dot;
    if (s == "edgelist") return GraphFormat::Edgelist;
    throw ArgumentError("unknown graph format: " + s);
}

namespace {

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

struct NodeInfo {
    std::string name;
    std::string sector;
    std::string relationship;
};

NodeInfo node_info(const Sample& sample, const std::string& key) {
    const Organization* org = sample.find(key);
    if (org == nullptr) return NodeInfo{key, "", ""};
    return NodeInfo{org->name, to_string(org->sector), to_string(org->relationship)};
}

std::string render_gexf(const InterlinkNetwork& net, const Sample& sample,
                        const DegreeTable& degrees,
                        const std::vector<double>& betweenness_scores) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n";
    out += "  <graph mode=\"static\" defaultedgetype=\"directed\">\n";
    out += "    <attributes class=\"node\">\n";
    out += "      <attribute id=\"0\" title=\"name\" type=\"string\"/>\n";
    out += "      <attribute id=\"1\" title=\"sector\" type=\"string\"/>\n";
    out += "      <attribute id=\"2\" title=\"relationship\" type=\"string\"/>\n";
    out += "      <attribute id=\"3\" title=\"in_degree\" type=\"integer\"/>\n";
    out += "      <attribute id=\"4\" title=\"out_degree\" type=\"integer\"/>\n";
    out += "      <attribute id=\"5\" title=\"betweenness\" type=\"double\"/>\n";
    out += "    </attributes>\n";
    out += "    <attributes class=\"edge\">\n";
    out += "      <attribute id=\"6\" title=\"mutual\" type=\"boolean\"/>\n";
    out += "    </attributes>\n";
    out += "    <nodes>\n";
    const std::size_t n = net.size();
    for (std::size_t i = 0; i < n; ++i) {
        NodeInfo info = node_info(sample, net.nodes()[i]);
        out += "      <node id=\"" + xml_escape(net.nodes()[i]) + "\" label=\"" +
               xml_escape(info.name) + "\">\n";
        out += "        <attvalues>\n";
        out += "          <attvalue for=\"0\" value=\"" + xml_escape(info.name) + "\"/>\n";
        out += "          <attvalue for=\"1\" value=\"" + xml_escape(info.sector) + "\"/>\n";
        out += "          <attvalue for=\"2\" value=\"" + xml_escape(info.relationship) +
               "\"/>\n";
        out += "          <attvalue for=\"3\" value=\"" +
               std::to_string(degrees.in_degree[i]) + "\"/>\n";
        out += "          <attvalue for=\"4\" value=\"" +
               std::to_string(degrees.out_degree[i]) + "\"/>\n";
        out += "          <attvalue for=\"5\" value=\"" +
               format_fixed(betweenness_scores[i], 6) + "\"/>\n";
        out += "        </attvalues>\n";
        out += "      </node>\n";
    }
    out += "    </nodes>\n";
    out += "    <edges>\n";
    std::size_t edge_id = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!net.arc(i, j)) continue;
            bool mutual = net.arc(j, i);
            out += "      <edge id=\"" + std::to_string(edge_id++) + "\" source=\"" +
                   xml_escape(net.nodes()[i]) + "\" target=\"" + xml_escape(net.nodes()[j]) +
                   "\">\n";
            out += "        <attvalues>\n";
            out += std::string("          <attvalue for=\"6\" value=\"") +
                   (mutual ? "true" : "false") + "\"/>\n";
            out += "        </attvalues>\n";
            out += "      </edge>\n";
        }
    }
    out += "    </edges>\n";
    out += "  </graph>\n";
    out += "</gexf>\n";
    return out;
}

std::string render_dot(const InterlinkNetwork& net, const Sample& sample,
                       const DegreeTable& degrees,
                       const std::vector<double>& betweenness_scores) {
    std::string out = "digraph interlinks {\n";
    const std::size_t n = net.size();
    for (std::size_t i = 0; i < n; ++i) {
        NodeInfo info = node_info(sample, net.nodes()[i]);
        out += "  \"" + dot_escape(net.nodes()[i]) + "\" [label=\"" + dot_escape(info.name) +
               "\", sector=\"" + dot_escape(info.sector) + "\", relationship=\"" +
               dot_escape(info.relationship) + "\", in_degree=" +
               std::to_string(degrees.in_degree[i]) + ", out_degree=" +
               std::to_string(degrees.out_degree[i]) + ", betweenness=" +
               format_fixed(betweenness_scores[i], 6) + "];\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!net.arc(i, j)) continue;
            bool mutual = net.arc(j, i);
            out += "  \"" + dot_escape(net.nodes()[i]) + "\" -> \"" +
                   dot_escape(net.nodes()[j]) + "\" [penwidth=" + (mutual ? "2.5" : "1.0") +
                   "];\n";
        }
    }
    out += "}\n";
    return out;
}

std::string render_edgelist(const InterlinkNetwork& net) {
    std::string out;
    for (const auto& node : net.nodes()) out += "#node\t" + node + "\n";
    const std::size_t n = net.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!net.arc(i, j)) continue;
            bool mutual = net.arc(j, i);
            out += net.nodes()[i] + "\t" + net.nodes()[j] + "\t" +
                   (mutual ? "true" : "false") + "\n";
        }
    }
    return out;
}

}  // namespace

std::string export_graph(const InterlinkNetwork& net, const Sample& sample,
                         const DegreeTable& degrees,
                         const std::vector<double>& betweenness_scores,
                         GraphFormat format) {
    if (degrees.nodes != net.nodes() || betweenness_scores.size() != net.size())
        throw StructuralError("export requires centrality tables aligned with the network");
    switch (format) {
        case GraphFormat::Gexf: return render_gexf(net, sample, degrees, betweenness_scores);
        case GraphFormat::Dot: return render_dot(net, sample, degrees, betweenness_scores);
        case GraphFormat::Edgelist: return render_edgelist(net);
    }
    throw ArgumentError("unknown graph format");
}

void export_graph_file(const InterlinkNetwork& net, const Sample& sample,
                       const DegreeTable& degrees,
                       const std::vector<double>& betweenness_scores,
                       GraphFormat format, const std::string& path) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write graph export: " + path);
    out << export_graph(net, sample, degrees, betweenness_scores, format);
}

InterlinkNetwork import_edgelist(const std::string& path, Provenance provenance,
                                 std::string seed_key) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read edgelist: " + path);

    std::vector<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> arcs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("#node\t", 0) == 0) {
            nodes.push_back(line.substr(6));
            continue;
        }
        if (line[0] == '#') continue;
        auto tab1 = line.find('\t');
        auto tab2 = line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos)
            throw Error("malformed edgelist line: " + line);
        std::string source = line.substr(0, tab1);
        std::string target = tab2 == std::string::npos
                                 ? line.substr(tab1 + 1)
                                 : line.substr(tab1 + 1, tab2 - tab1 - 1);
        nodes.push_back(source);
        nodes.push_back(target);
        arcs.emplace_back(std::move(source), std::move(target));
    }
    InterlinkNetwork net(nodes, provenance, std::move(seed_key));
    for (const auto& [source, target] : arcs) net.set_arc(source, target);
    return net;
}

}  // namespace linknet

#include "socnet/export.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <set>

#include "socnet/csv.hpp"

namespace socnet {

GraphFormat parse_graph_format(std::string_view text) {
    if (text == "graphml") return GraphFormat::GraphML;
    if (text == "dot") return GraphFormat::Dot;
    if (text == "csv" || text == "edge-csv") return GraphFormat::EdgeCsv;
    throw ValidationError("unknown graph format '" + std::string(text) + "' (expected graphml, dot or csv)");
}

std::string_view file_extension(GraphFormat format) {
    switch (format) {
        case GraphFormat::GraphML: return ".graphml";
        case GraphFormat::Dot: return ".dot";
        case GraphFormat::EdgeCsv: return ".csv";
    }
    return ".txt";
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_graphml(std::ostream& out, const Snapshot& g, const NodeAttributes& attrs) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    if (attrs.roles) out << "  <key id=\"role\" for=\"node\" attr.name=\"role\" attr.type=\"string\"/>\n";
    if (attrs.measures) {
        for (MeasureId id : attrs.measures->measures()) {
            out << "  <key id=\"" << to_string(id) << "\" for=\"node\" attr.name=\"" << to_string(id)
                << "\" attr.type=\"double\"/>\n";
        }
    }
    out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n"
           "  <key id=\"strength\" for=\"edge\" attr.name=\"strength\" attr.type=\"double\"/>\n"
           "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        const auto& id = g.node(v);
        out << "    <node id=\"" << xml_escape(id) << "\"";
        std::string body;
        if (attrs.roles) {
            if (auto it = attrs.roles->find(id); it != attrs.roles->end()) {
                body += "<data key=\"role\">" + xml_escape(it->second) + "</data>";
            }
        }
        if (attrs.measures) {
            if (auto row = attrs.measures->row_of(id)) {
                for (const auto& [mid, value] : attrs.measures->scaled_row(*row)) {
                    body += "<data key=\"" + std::string(to_string(mid)) + "\">" + csv::format_double(value) + "</data>";
                }
            }
        }
        if (body.empty()) {
            out << "/>\n";
        } else {
            out << ">" << body << "</node>\n";
        }
    }
    for (const auto& e : g.edges()) {
        out << "    <edge source=\"" << xml_escape(g.node(e.src)) << "\" target=\"" << xml_escape(g.node(e.dst))
            << "\"><data key=\"weight\">" << e.weight << "</data><data key=\"strength\">"
            << csv::format_double(g.strength(e.src, e.dst)) << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& out, const Snapshot& g, const NodeAttributes& attrs) {
    out << "digraph G {\n";
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        const auto& id = g.node(v);
        std::vector<std::string> parts;
        if (attrs.roles) {
            if (auto it = attrs.roles->find(id); it != attrs.roles->end()) parts.push_back("role=" + dot_quote(it->second));
        }
        if (attrs.measures) {
            if (auto row = attrs.measures->row_of(id)) {
                for (const auto& [mid, value] : attrs.measures->scaled_row(*row)) {
                    parts.push_back(std::string(to_string(mid)) + "=" + csv::format_double(value));
                }
            }
        }
        out << "  " << dot_quote(id);
        if (!parts.empty()) {
            out << " [";
            for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? ", " : "") << parts[i];
            out << "]";
        }
        out << ";\n";
    }
    for (const auto& e : g.edges()) {
        out << "  " << dot_quote(g.node(e.src)) << " -> " << dot_quote(g.node(e.dst)) << " [label=\"" << e.weight
            << "\", weight=" << e.weight << ", strength=" << csv::format_double(g.strength(e.src, e.dst)) << "];\n";
    }
    out << "}\n";
}

void write_edge_csv(std::ostream& out, const Snapshot& g) {
    csv::write_row(out, {"src", "dst", "weight", "strength"});
    for (const auto& e : g.edges()) {
        csv::write_row(out, {g.node(e.src), g.node(e.dst), std::to_string(e.weight),
                             csv::format_double(g.strength(e.src, e.dst))});
    }
}

}  // namespace

void export_graph(std::ostream& out, const Snapshot& g, GraphFormat format, const NodeAttributes& attrs) {
    switch (format) {
        case GraphFormat::GraphML: write_graphml(out, g, attrs); break;
        case GraphFormat::Dot: write_dot(out, g, attrs); break;
        case GraphFormat::EdgeCsv: write_edge_csv(out, g); break;
    }
}

Snapshot import_graphml(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw ValidationError(std::string("malformed GraphML: ") + e.what());
    }
    const auto& graphml = tree.get_child("graphml");
    std::string weight_key = "weight";
    for (const auto& [tag, child] : graphml) {
        if (tag == "key" && child.get<std::string>("<xmlattr>.attr.name", "") == "weight" &&
            child.get<std::string>("<xmlattr>.for", "") == "edge") {
            weight_key = child.get<std::string>("<xmlattr>.id");
        }
    }
    const auto& graph = graphml.get_child("graph");
    std::vector<EntityId> nodes;
    std::vector<std::tuple<EntityId, EntityId, std::uint32_t>> edges;
    for (const auto& [tag, child] : graph) {
        if (tag == "node") {
            nodes.push_back(child.get<std::string>("<xmlattr>.id"));
        } else if (tag == "edge") {
            std::uint32_t w = 1;
            for (const auto& [dtag, data] : child) {
                if (dtag == "data" && data.get<std::string>("<xmlattr>.key", "") == weight_key) {
                    w = static_cast<std::uint32_t>(csv::parse_int(data.get_value<std::string>()));
                }
            }
            edges.emplace_back(child.get<std::string>("<xmlattr>.source"), child.get<std::string>("<xmlattr>.target"), w);
        }
    }
    return Snapshot::from_named_edges(edges, nodes);
}

Snapshot import_edge_csv(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> row;
    std::vector<std::tuple<EntityId, EntityId, std::uint32_t>> edges;
    if (!reader.next(row)) return Snapshot{};
    const csv::Header header(row);
    const auto c_src = header.require("src");
    const auto c_dst = header.require("dst");
    const auto c_w = header.require("weight");
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        edges.emplace_back(row.at(c_src), row.at(c_dst), static_cast<std::uint32_t>(csv::parse_int(row.at(c_w))));
    }
    return Snapshot::from_named_edges(edges);
}

}  // namespace socnet

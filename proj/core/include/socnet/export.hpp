#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "socnet/graph.hpp"
#include "socnet/measures.hpp"

namespace socnet {

enum class GraphFormat { GraphML, Dot, EdgeCsv };

GraphFormat parse_graph_format(std::string_view text);
std::string_view file_extension(GraphFormat format);

struct NodeAttributes {
    const std::map<EntityId, std::string>* roles = nullptr;
    const MeasureMatrix* measures = nullptr;  // scaled values are exported
};

// Edges carry weight and strength (EN); nodes carry role and scaled measures when given.
void export_graph(std::ostream& out, const Snapshot& g, GraphFormat format, const NodeAttributes& attrs = {});

// Reads a GraphML document written by export_graph (or any GraphML with an
// integer "weight" edge attribute; missing weights count as 1).
Snapshot import_graphml(std::istream& in);

// Reads an edge CSV written by export_graph.
Snapshot import_edge_csv(std::istream& in);

}  // namespace socnet

#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "dwlab/digraph.hpp"

namespace dwlab {

enum class GraphFormat { Json, Dot, EdgeList };

std::optional<GraphFormat> graph_format_from_name(std::string_view s);

nlohmann::json graph_to_json(const Digraph& g);
Digraph graph_from_json(const nlohmann::json& j);

std::string encode(const Digraph& g, GraphFormat format);

/// Inverse of encode. Roles survive only the JSON format. Errors are
/// ParseError carrying the byte offset of the problem.
Digraph decode(std::string_view payload, GraphFormat format);

nlohmann::json set_to_json(const VertexSet& s);
VertexSet set_from_json(const nlohmann::json& j, const Digraph& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

}  // namespace dwlab

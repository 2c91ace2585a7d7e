#pragma once

#include <iosfwd>
#include <string>

#include "agrasst/graph.hpp"

namespace agrasst {

// Edge-list text format:
//   n <vertex count>
//   i j        (one edge per line, 0-based)
// '#' starts a comment, blank lines are ignored.  Serialization writes edges
// sorted with i<j, so parse/serialize round-trips are byte stable.
Graph parse_edge_list(std::istream& in);
Graph parse_edge_list(const std::string& text);
Graph load_edge_list(const std::string& path);

void serialize_edge_list(const Graph& g, std::ostream& out);
std::string serialize_edge_list(const Graph& g);
void save_edge_list(const Graph& g, const std::string& path);

}  // namespace agrasst

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lapsparse/graph.hpp"

namespace lapsparse {

/// Edge-list text: a header line `n=<N>`, then one `i j w` triple per
/// line. `#` starts a comment. Indices are 0-based.
WeightedGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedGraph& g);

/// Symmetric coordinate-format matrix file, 1-based, lower triangle.
WeightedGraph read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const WeightedGraph& g);

/// Dispatches on extension: `.mtx` is the coordinate format, anything else
/// is the edge-list format.
WeightedGraph load_graph(const std::filesystem::path& path);
void save_graph(const WeightedGraph& g, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace lapsparse

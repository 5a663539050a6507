#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "graft/hetgraph.hpp"

namespace graft {

// Line-oriented text format:
//   graphfmt 1
//   v <id> <type>
//   e <id1> <id2> <weight>
// Blank lines and lines starting with '#' are ignored. Output is canonical:
// v-lines by id, then e-lines by (id1, id2) with id1 < id2.

HeteroGraph parse_graph(std::istream& in);
void format_graph(const HeteroGraph& g, std::ostream& out);

HeteroGraph read_graph(const std::filesystem::path& path);
void write_graph(const HeteroGraph& g, const std::filesystem::path& path);

/// Canonical text of `g` (what write_graph puts on disk).
std::string to_text(const HeteroGraph& g);

/// Shortest decimal text that round-trips the double exactly.
std::string format_real(double value);

}  // namespace graft

#include "graft/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "graft/error.hpp"

namespace graft {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_weight(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw FormatError("bad weight '" + text + "'", line_no);
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw FormatError("weight must be positive and finite", line_no);
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format real");
  return {buf, ptr};
}

HeteroGraph parse_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  struct EdgeLine {
    EntityId a;
    EntityId b;
    double weight;
    std::size_t line;
  };
  std::map<EntityId, EntityType> entities;
  std::vector<EdgeLine> edges;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tok = split_ws(line);

    if (!header_seen) {
      if (tok.size() != 2 || tok[0] != "graphfmt") {
        throw FormatError("expected header 'graphfmt 1'", line_no);
      }
      if (tok[1] != "1") throw FormatError("unsupported graph format version " + tok[1], line_no);
      header_seen = true;
      continue;
    }

    try {
      if (tok[0] == "v") {
        if (tok.size() != 3) throw FormatError("entity line needs 'v <id> <type>'", line_no);
        EntityId id(tok[1]);
        if (!entities.emplace(id, EntityType(tok[2])).second) {
          throw FormatError("duplicate entity id '" + tok[1] + "'", line_no);
        }
      } else if (tok[0] == "e") {
        if (tok.size() != 4) {
          throw FormatError("edge line needs 'e <id1> <id2> <weight>'", line_no);
        }
        if (tok[1] == tok[2]) throw FormatError("self-loop on '" + tok[1] + "'", line_no);
        edges.push_back({EntityId(tok[1]), EntityId(tok[2]), parse_weight(tok[3], line_no), line_no});
      } else {
        throw FormatError("unknown record kind '" + tok[0] + "'", line_no);
      }
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  if (!header_seen) throw FormatError("missing header 'graphfmt 1'", line_no == 0 ? 1 : line_no);

  GraphBuilder builder;
  for (const auto& [id, type] : entities) builder.add_entity(id, type);
  std::set<std::pair<EntityId, EntityId>> seen;
  for (const EdgeLine& e : edges) {
    if (!entities.contains(e.a)) throw FormatError("dangling endpoint '" + e.a.str() + "'", e.line);
    if (!entities.contains(e.b)) throw FormatError("dangling endpoint '" + e.b.str() + "'", e.line);
    auto key = e.a < e.b ? std::make_pair(e.a, e.b) : std::make_pair(e.b, e.a);
    if (!seen.insert(key).second) {
      throw FormatError("duplicate edge '" + key.first.str() + "' - '" + key.second.str() + "'",
                        e.line);
    }
    builder.add_edge(e.a, e.b, e.weight);
  }
  return builder.build();
}

void format_graph(const HeteroGraph& g, std::ostream& out) {
  out << "graphfmt 1\n";
  for (const Entity& e : g.entities()) out << "v " << e.id.str() << ' ' << e.type.str() << '\n';
  for (const Edge& e : g.edges()) {
    out << "e " << g.entity(e.u).id.str() << ' ' << g.entity(e.v).id.str() << ' '
        << format_real(e.weight) << '\n';
  }
}

std::string to_text(const HeteroGraph& g) {
  std::ostringstream ss;
  format_graph(g, ss);
  return ss.str();
}

HeteroGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path.string() + "'");
  try {
    return parse_graph(in);
  } catch (const FormatError& e) {
    throw FormatError(e.detail(), e.line(), path.string());
  }
}

void write_graph(const HeteroGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write graph file '" + path.string() + "'");
  format_graph(g, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace graft

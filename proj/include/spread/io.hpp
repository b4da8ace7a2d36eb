#pragma once

#include <iosfwd>
#include <string>

#include "spread/instance.hpp"

namespace spread {

// Graph text format, one record per line:
//   n=<count> directed=<0|1>
//   node <id> group=<g> tl=<t_low> th=<t_high>
//   arc <src> <dst> <trust>
// Nodes appear in id order, arcs in (src, dst) order. Floats are written
// with enough digits to round-trip bit-exactly. directed=0 marks a
// symmetric graph (both arcs of every pair are still listed).
struct GraphFile {
  TrustGraph graph;
  std::vector<NodeProfile> profiles;
};

void write_graph(std::ostream& os, const TrustGraph& g,
                 const std::vector<NodeProfile>& profiles);
GraphFile read_graph(std::istream& is);

void save_graph(const std::string& path, const TrustGraph& g,
                const std::vector<NodeProfile>& profiles);
GraphFile load_graph(const std::string& path);

// Seeding text format: one line per source, "source <k>: <ids...>",
// k counted from 1, ids sorted ascending.
void write_seeding(std::ostream& os, const Seeding& s);
Seeding read_seeding(std::istream& is);
void save_seeding(const std::string& path, const Seeding& s);
Seeding load_seeding(const std::string& path);

}  // namespace spread

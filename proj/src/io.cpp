#include "spread/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spread {

namespace {

// %.17g is the shortest format guaranteed to round-trip a double.
std::string fp(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& line, const char* why) {
  std::ostringstream os;
  os << "parse error at line " << line_no << " (" << why << "): " << line;
  throw std::runtime_error(os.str());
}

}  // namespace

void write_graph(std::ostream& os, const TrustGraph& g,
                 const std::vector<NodeProfile>& profiles) {
  if (profiles.size() != g.node_count())
    throw std::invalid_argument("profiles size does not match node count");
  os << "n=" << g.node_count() << " directed=" << (g.symmetric() ? 0 : 1) << "\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    os << "node " << u << " group=" << g.group(u) << " tl=" << fp(profiles[u].t_low)
       << " th=" << fp(profiles[u].t_high) << "\n";
  }
  for (const Arc& a : g.arcs()) {
    os << "arc " << a.src << " " << a.dst << " " << fp(a.trust) << "\n";
  }
}

GraphFile read_graph(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw std::runtime_error("empty graph file");
  unsigned long n = 0;
  int directed = 0;
  if (std::sscanf(line.c_str(), "n=%lu directed=%d", &n, &directed) != 2 ||
      (directed != 0 && directed != 1))
    parse_fail(line_no, line, "expected header");

  GraphFile gf;
  gf.graph = TrustGraph(static_cast<NodeId>(n), directed == 0);
  gf.profiles.resize(n);

  for (unsigned long u = 0; u < n; ++u) {
    if (!next_line()) throw std::runtime_error("truncated graph file: missing node lines");
    unsigned long id = 0, grp = 0;
    double tl = 0, th = 0;
    if (std::sscanf(line.c_str(), "node %lu group=%lu tl=%lf th=%lf", &id, &grp, &tl, &th) != 4)
      parse_fail(line_no, line, "expected node line");
    if (id != u) parse_fail(line_no, line, "node ids must be dense and in order");
    gf.graph.set_group(static_cast<NodeId>(id), static_cast<std::uint32_t>(grp));
    gf.profiles[id] = {tl, th};
  }

  while (next_line()) {
    unsigned long src = 0, dst = 0;
    double trust = 0;
    if (std::sscanf(line.c_str(), "arc %lu %lu %lf", &src, &dst, &trust) != 3)
      parse_fail(line_no, line, "expected arc line");
    if (src >= n || dst >= n) parse_fail(line_no, line, "arc endpoint out of range");
    gf.graph.add_arc(static_cast<NodeId>(src), static_cast<NodeId>(dst), trust);
  }

  gf.graph.finalize();
  return gf;
}

void save_graph(const std::string& path, const TrustGraph& g,
                const std::vector<NodeProfile>& profiles) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_graph(os, g, profiles);
  if (!os) throw std::runtime_error("write failed: " + path);
}

GraphFile load_graph(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_graph(is);
}

void write_seeding(std::ostream& os, const Seeding& s) {
  for (std::size_t k = 0; k < s.sets.size(); ++k) {
    os << "source " << (k + 1) << ":";
    for (NodeId u : s.sets[k]) os << " " << u;
    os << "\n";
  }
}

Seeding read_seeding(std::istream& is) {
  Seeding s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    unsigned long k = 0;
    char colon = 0;
    if (!(ls >> word) || word != "source" || !(ls >> k) || !(ls.get(colon)) || colon != ':')
      parse_fail(line_no, line, "expected 'source <k>: <ids...>'");
    if (k != s.sets.size() + 1)
      parse_fail(line_no, line, "source indices must be 1..K in order");
    std::vector<NodeId> ids;
    unsigned long u;
    while (ls >> u) ids.push_back(static_cast<NodeId>(u));
    if (!ls.eof()) parse_fail(line_no, line, "bad node id");
    s.sets.push_back(std::move(ids));
  }
  s.normalize();
  return s;
}

void save_seeding(const std::string& path, const Seeding& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_seeding(os, s);
  if (!os) throw std::runtime_error("write failed: " + path);
}

Seeding load_seeding(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_seeding(is);
}

}  // namespace spread

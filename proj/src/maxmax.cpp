#include "spread/maxmax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spread {

void CoverageScratch::reset(NodeId n) {
  if (best.size() < n) {
    best.assign(n, 0.0);
    settled.assign(n, 0);
  } else {
    for (NodeId u : touched) {
      best[u] = 0.0;
      settled[u] = 0;
    }
  }
  touched.clear();
  heap.clear();
}

namespace {

// Max-heap on value; ties pop the smaller node id first so traversal order
// is deterministic.
inline bool heap_less(const std::pair<double, NodeId>& a, const std::pair<double, NodeId>& b) {
  if (a.first != b.first) return a.first < b.first;
  return a.second > b.second;
}

}  // namespace

void singleton_coverage_into(const SimplifiedInstance& sinst, NodeId u, std::uint32_t k,
                             CoverageScratch& scratch, std::vector<NodeId>& out) {
  const TrustGraph& g = *sinst.graph;
  out.clear();
  scratch.reset(g.node_count());

  const SourceSpec& src = sinst.sources[k];
  const double v0 = src.trust(u) * src.info_value;

  auto& heap = scratch.heap;
  scratch.best[u] = v0;
  scratch.touched.push_back(u);
  heap.emplace_back(v0, u);

  // Trust factors are at most 1, so values along a path only shrink and the
  // first pop of a node carries its maximum attainable value.
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), heap_less);
    const auto [value, node] = heap.back();
    heap.pop_back();
    if (scratch.settled[node] || value < scratch.best[node]) continue;
    scratch.settled[node] = 1;
    if (value < sinst.threshold[node]) continue;  // absorbs, does not forward
    out.push_back(node);
    for (const auto& nb : g.out_arcs(node)) {
      if (scratch.settled[nb.node]) continue;
      const double v = value * nb.trust;
      if (v > scratch.best[nb.node]) {
        if (scratch.best[nb.node] == 0.0) scratch.touched.push_back(nb.node);
        scratch.best[nb.node] = v;
        heap.emplace_back(v, nb.node);
        std::push_heap(heap.begin(), heap.end(), heap_less);
      }
    }
  }
  std::sort(out.begin(), out.end());
}

std::vector<NodeId> singleton_coverage(const SimplifiedInstance& sinst, NodeId u,
                                       std::uint32_t k) {
  if (!sinst.graph || !sinst.graph->finalized()) throw std::logic_error("graph not finalized");
  if (u >= sinst.node_count()) throw std::invalid_argument("seed node out of range");
  if (k >= sinst.source_count()) throw std::invalid_argument("source index out of range");
  CoverageScratch scratch;
  std::vector<NodeId> out;
  singleton_coverage_into(sinst, u, k, scratch, out);
  return out;
}

UnionCoverage union_coverage(const SimplifiedInstance& sinst, const Seeding& seeding) {
  if (seeding.sets.size() != sinst.source_count())
    throw std::invalid_argument("seeding has wrong number of source sets");
  const NodeId n = sinst.node_count();
  thread_local std::vector<std::uint8_t> hit;
  hit.assign(n, 0);
  thread_local CoverageScratch scratch;
  thread_local std::vector<NodeId> ball;
  for (std::uint32_t k = 0; k < sinst.source_count(); ++k) {
    for (NodeId u : seeding.sets[k]) {
      if (u >= n) throw std::invalid_argument("seed node out of range");
      singleton_coverage_into(sinst, u, k, scratch, ball);
      for (NodeId w : ball) hit[w] = 1;
    }
  }
  UnionCoverage uc;
  for (NodeId w = 0; w < n; ++w)
    if (hit[w]) uc.converted.push_back(w);
  uc.count = static_cast<std::uint32_t>(uc.converted.size());
  return uc;
}

SimplifiedInstance collapse_identical_sources(const SimplifiedInstance& sinst) {
  if (sinst.sources.empty()) throw std::invalid_argument("no sources to collapse");
  const NodeId n = sinst.node_count();
  const SourceSpec& first = sinst.sources[0];
  std::uint64_t total_budget = 0;
  for (const SourceSpec& s : sinst.sources) {
    if (s.info_value != first.info_value)
      throw std::invalid_argument("sources differ in info value; cannot collapse");
    for (NodeId u = 0; u < n; ++u)
      if (s.trust(u) != first.trust(u))
        throw std::invalid_argument("sources differ in node trust; cannot collapse");
    total_budget += s.budget;
  }

  SimplifiedInstance out;
  out.graph = sinst.graph;
  out.threshold = sinst.threshold;
  SourceSpec merged = first;
  merged.budget = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(total_budget, 0xffffffffu));
  out.sources = {std::move(merged)};
  return out;
}

}  // namespace spread

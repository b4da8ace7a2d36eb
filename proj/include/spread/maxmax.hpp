#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "spread/instance.hpp"

namespace spread {

// Degenerate instance where both blend weights are zero, both thresholds
// coincide, believers never evacuate, and transmission always succeeds.
// Under those rules a node converts iff some source reaches it along a path
// whose trust product (times the source-node trust at the path start) meets
// its threshold, which makes coverage a pure graph quantity.
struct SimplifiedInstance {
  std::shared_ptr<const TrustGraph> graph;
  std::vector<double> threshold;   // per node
  std::vector<SourceSpec> sources; // budgets carried along for the seeders

  NodeId node_count() const { return graph ? graph->node_count() : 0; }
  std::uint32_t source_count() const { return static_cast<std::uint32_t>(sources.size()); }
};

// Scratch space for repeated coverage searches on one graph. Reusing it
// keeps each search allocation-free and O(size of the converted ball),
// not O(n).
class CoverageScratch {
 public:
  void reset(NodeId n);
  std::vector<double> best;
  std::vector<std::uint8_t> settled;
  std::vector<NodeId> touched;
  std::vector<std::pair<double, NodeId>> heap;
};

// Nodes converted when node u is seeded by source k alone: best-first
// search on max trust-product, expanding only through nodes that convert
// (a node that absorbs below its threshold does not forward). Returned
// sorted by node id; empty when the seed itself does not convert.
std::vector<NodeId> singleton_coverage(const SimplifiedInstance& sinst, NodeId u,
                                       std::uint32_t k);
void singleton_coverage_into(const SimplifiedInstance& sinst, NodeId u, std::uint32_t k,
                             CoverageScratch& scratch, std::vector<NodeId>& out);

struct UnionCoverage {
  std::uint32_t count = 0;
  std::vector<NodeId> converted;  // sorted
};

// Coverage of a full seeding, computed as the union of the singleton
// coverages of its (node, source) pairs.
UnionCoverage union_coverage(const SimplifiedInstance& sinst, const Seeding& seeding);

// Folds sources with identical payload and identical per-node trust into a
// single source whose budget is the sum. Throws std::invalid_argument if
// the sources differ.
SimplifiedInstance collapse_identical_sources(const SimplifiedInstance& sinst);

}  // namespace spread

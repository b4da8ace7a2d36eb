#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spread {

using NodeId = std::uint32_t;

struct Arc {
  NodeId src;
  NodeId dst;
  double trust;
};

// Directed trust-weighted graph with per-node group labels. Arcs are added
// through the builder interface and frozen by finalize(), which sorts them
// by (src, dst), assigns arc ids by sorted position, and builds CSR
// adjacency in both directions. After finalize() the graph is immutable and
// safe to share across threads.
//
// The builder deliberately stores whatever it is given (out-of-range trust,
// self-arcs, duplicate ordered pairs) so that validation can report such
// problems instead of crashing; only node ids are range-checked at insert
// time because the CSR build needs them in bounds.
class TrustGraph {
 public:
  struct Neighbor {
    NodeId node;
    double trust;
    std::uint32_t arc_id;
  };

  TrustGraph() = default;
  explicit TrustGraph(NodeId n, bool symmetric = true);

  void add_arc(NodeId src, NodeId dst, double trust);
  // Adds the pair (u,v) and (v,u) with equal trust.
  void add_edge(NodeId u, NodeId v, double trust);
  void set_group(NodeId u, std::uint32_t g);
  void finalize();

  NodeId node_count() const { return n_; }
  std::size_t arc_count() const { return arcs_.size(); }
  bool symmetric() const { return symmetric_; }
  bool finalized() const { return finalized_; }

  std::uint32_t group(NodeId u) const { return group_[u]; }
  std::uint32_t group_count() const;
  std::span<const std::uint32_t> groups() const { return group_; }

  const Arc& arc(std::uint32_t id) const { return arcs_[id]; }
  std::span<const Arc> arcs() const { return arcs_; }

  std::span<const Neighbor> out_arcs(NodeId u) const {
    return {out_.data() + out_off_[u], out_.data() + out_off_[u + 1]};
  }
  std::span<const Neighbor> in_arcs(NodeId u) const {
    return {in_.data() + in_off_[u], in_.data() + in_off_[u + 1]};
  }
  std::uint32_t in_degree(NodeId u) const { return in_off_[u + 1] - in_off_[u]; }
  std::uint32_t out_degree(NodeId u) const { return out_off_[u + 1] - out_off_[u]; }
  // Offset of node u's first in-slot in a flat array of per-in-arc storage.
  std::uint32_t in_slot_base(NodeId u) const { return in_off_[u]; }

  double total_out_trust(NodeId u) const;
  double mean_trust() const { return mean_trust_; }

 private:
  NodeId n_ = 0;
  bool symmetric_ = true;
  bool finalized_ = false;
  std::vector<Arc> arcs_;
  std::vector<std::uint32_t> group_;
  std::vector<std::uint32_t> out_off_;
  std::vector<std::uint32_t> in_off_;
  std::vector<Neighbor> out_;
  std::vector<Neighbor> in_;
  double mean_trust_ = 0.0;
};

}  // namespace spread

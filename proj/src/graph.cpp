#include "spread/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace spread {

TrustGraph::TrustGraph(NodeId n, bool symmetric)
    : n_(n), symmetric_(symmetric), group_(n, 0) {}

void TrustGraph::add_arc(NodeId src, NodeId dst, double trust) {
  if (finalized_) throw std::logic_error("add_arc after finalize");
  if (src >= n_ || dst >= n_) throw std::invalid_argument("arc endpoint out of range");
  arcs_.push_back({src, dst, trust});
}

void TrustGraph::add_edge(NodeId u, NodeId v, double trust) {
  add_arc(u, v, trust);
  add_arc(v, u, trust);
}

void TrustGraph::set_group(NodeId u, std::uint32_t g) {
  if (u >= n_) throw std::invalid_argument("node out of range");
  group_[u] = g;
}

std::uint32_t TrustGraph::group_count() const {
  std::uint32_t m = 0;
  for (std::uint32_t g : group_) m = std::max(m, g + 1);
  return m;
}

double TrustGraph::total_out_trust(NodeId u) const {
  double s = 0.0;
  for (const Neighbor& nb : out_arcs(u)) s += nb.trust;
  return s;
}

void TrustGraph::finalize() {
  if (finalized_) return;
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  out_off_.assign(n_ + 1, 0);
  in_off_.assign(n_ + 1, 0);
  for (const Arc& a : arcs_) {
    ++out_off_[a.src + 1];
    ++in_off_[a.dst + 1];
  }
  for (NodeId u = 0; u < n_; ++u) {
    out_off_[u + 1] += out_off_[u];
    in_off_[u + 1] += in_off_[u];
  }

  out_.resize(arcs_.size());
  in_.resize(arcs_.size());
  std::vector<std::uint32_t> in_fill(in_off_.begin(), in_off_.end() - 1);
  double trust_sum = 0.0;
  for (std::uint32_t id = 0; id < arcs_.size(); ++id) {
    const Arc& a = arcs_[id];
    out_[id] = {a.dst, a.trust, id};  // arcs are sorted by src, so out CSR is direct
    in_[in_fill[a.dst]++] = {a.src, a.trust, id};
    trust_sum += a.trust;
  }
  mean_trust_ = arcs_.empty() ? 0.0 : trust_sum / static_cast<double>(arcs_.size());
  finalized_ = true;
}

}  // namespace spread

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dexnet/core.hpp"
#include "dexnet/ingest.hpp"

namespace dexnet {

using NodeIndex = std::uint32_t;
using EdgeWeight = std::uint64_t;

/// Undirected token graph tagged with (platform, slice). Immutable after
/// construction and safe to share across threads. Nodes are ordered by
/// ascending address; adjacency lists are ordered by neighbor index. No
/// self-loops; every node has at least one incident event at build time
/// (degree-0 nodes can appear only through filtering).
class TokenGraph {
 public:
  struct Edge {
    NodeIndex a = 0;  // a < b
    NodeIndex b = 0;
    EdgeWeight weight = 1;
  };

  using Neighbor = std::pair<NodeIndex, EdgeWeight>;

  /// Accumulates edge weights keyed by the canonical token pair.
  class Builder {
   public:
    void add(const TokenId& x, const TokenId& y, EdgeWeight weight = 1);
    TokenGraph build(Platform platform, SliceIndex slice, bool weighted) &&;

   private:
    std::map<std::pair<std::string, std::string>, EdgeWeight> weights_;
    std::map<std::string, std::string> symbols_;
  };

  TokenGraph() = default;

  const Platform& platform() const { return platform_; }
  SliceIndex slice() const { return slice_; }
  bool weighted() const { return weighted_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  /// Sum of edge weights (equals edge_count for unweighted graphs).
  EdgeWeight total_weight() const { return total_weight_; }
  bool empty() const { return nodes_.empty(); }

  std::span<const TokenId> nodes() const { return nodes_; }
  const TokenId& node(NodeIndex i) const { return nodes_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Neighbor> neighbors(NodeIndex i) const {
    return {adjacency_[i].data(), adjacency_[i].size()};
  }
  std::size_t degree(NodeIndex i) const { return adjacency_[i].size(); }
  /// Sum of incident edge weights.
  EdgeWeight weighted_degree(NodeIndex i) const;

  std::optional<NodeIndex> index_of(std::string_view address) const;
  bool has_node(std::string_view address) const { return index_of(address).has_value(); }
  std::optional<EdgeWeight> edge_weight(NodeIndex a, NodeIndex b) const;

 private:
  friend class TokenGraphAccess;

  Platform platform_;
  SliceIndex slice_;
  bool weighted_ = false;
  std::vector<TokenId> nodes_;  // ascending by address
  std::vector<Edge> edges_;     // ascending by (a, b)
  std::vector<std::vector<Neighbor>> adjacency_;
  EdgeWeight total_weight_ = 0;
};

/// Builds the graph of one slice from an event stream. Events on other
/// platforms are ignored; slice t_0 includes every event, slice i keeps the
/// events whose block falls in segment i. Unweighted graphs carry weight 1
/// on every edge; weighted graphs carry transfer counts.
TokenGraph build_graph(std::span<const EdgeEvent> events, const TimeSegmentation& seg,
                       SliceIndex slice, const Platform& platform, bool weighted);

/// Keeps only nodes whose degree in `g` is at least `d`, plus the edges among
/// them. Single pass: degrees are read from `g` once, never re-filtered.
TokenGraph filter_min_degree(const TokenGraph& g, std::size_t d);

/// Subgraph induced by the given node indices (any order, duplicates ignored).
TokenGraph induced_subgraph(const TokenGraph& g, std::span<const NodeIndex> keep);

/// One graph per slice, t_1..t_n; slices without events yield empty graphs
/// that stay in the series.
std::vector<TokenGraph> slice_series(std::span<const EdgeEvent> events,
                                     const TimeSegmentation& seg, const Platform& platform,
                                     bool weighted);

/// Union of the slice graphs with edge weights summed: the t_0 graph of the
/// stream the series came from. For unweighted series the result carries
/// weight 1 per edge.
TokenGraph combine_slices(std::span<const TokenGraph> series);

/// Per-slice aggregated edge weights over a full segmentation; the compact
/// form every analysis reads its graphs from. Slice 0 materializes the t_0
/// graph by weight summation.
class GraphBundle {
 public:
  struct SliceEdge {
    NodeIndex a = 0;  // indexes into tokens(), a < b
    NodeIndex b = 0;
    EdgeWeight weight = 1;
  };

  GraphBundle(Platform platform, TimeSegmentation seg, bool weighted,
              std::vector<TokenId> tokens, std::vector<std::vector<SliceEdge>> slice_edges);

  static GraphBundle from_events(std::span<const EdgeEvent> events, TimeSegmentation seg,
                                 Platform platform, bool weighted);

  const Platform& platform() const { return platform_; }
  const TimeSegmentation& segmentation() const { return seg_; }
  bool weighted() const { return weighted_; }
  std::size_t slice_count() const { return slice_edges_.size(); }
  std::span<const TokenId> tokens() const { return tokens_; }
  std::span<const SliceEdge> slice_edges(std::size_t slice) const {
    return slice_edges_[slice - 1];
  }

  /// Materializes one slice graph; SliceIndex 0 yields t_0.
  TokenGraph graph(SliceIndex slice) const;
  /// Materializes t_1..t_n.
  std::vector<TokenGraph> series() const;

 private:
  Platform platform_;
  TimeSegmentation seg_;
  bool weighted_ = false;
  std::vector<TokenId> tokens_;                      // ascending by address
  std::vector<std::vector<SliceEdge>> slice_edges_;  // [slice-1], ascending (a, b)
};

}  // namespace dexnet

#include "dexnet/graph.hpp"

#include <fmt/core.h>

#include <algorithm>

namespace dexnet {

// TokenGraph construction goes through this single path so node ordering,
// adjacency ordering, and the unweighted weight-1 rule stay in one place.
class TokenGraphAccess {
 public:
  static TokenGraph make(Platform platform, SliceIndex slice, bool weighted,
                         std::vector<TokenId> nodes, std::vector<TokenGraph::Edge> edges) {
    TokenGraph g;
    g.platform_ = std::move(platform);
    g.slice_ = slice;
    g.weighted_ = weighted;
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);
    g.adjacency_.assign(g.nodes_.size(), {});
    g.total_weight_ = 0;
    for (auto& e : g.edges_) {
      if (!weighted) {
        e.weight = 1;
      }
      g.adjacency_[e.a].emplace_back(e.b, e.weight);
      g.adjacency_[e.b].emplace_back(e.a, e.weight);
      g.total_weight_ += e.weight;
    }
    for (auto& nbrs : g.adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
    }
    return g;
  }
};

namespace {

void remember_symbol(std::map<std::string, std::string>& symbols, const TokenId& token) {
  auto [it, inserted] = symbols.emplace(token.address(), token.symbol());
  if (!inserted && it->second.empty() && !token.symbol().empty()) {
    it->second = token.symbol();
  }
}

/// Accumulated canonical edges keyed by address pair, ready to become a graph.
struct EdgeAccumulator {
  std::map<std::string, std::string> symbols;
  std::map<std::pair<std::string, std::string>, EdgeWeight> weights;

  void add(const TokenId& x, const TokenId& y, EdgeWeight weight) {
    remember_symbol(symbols, x);
    remember_symbol(symbols, y);
    const TokenId& lo = x < y ? x : y;
    const TokenId& hi = x < y ? y : x;
    weights[{lo.address(), hi.address()}] += weight;
  }
};

TokenGraph assemble(EdgeAccumulator&& acc, Platform platform, SliceIndex slice, bool weighted) {
  std::vector<TokenId> nodes;
  nodes.reserve(acc.symbols.size());
  std::map<std::string, NodeIndex> index;
  for (auto& [address, symbol] : acc.symbols) {
    index.emplace(address, static_cast<NodeIndex>(nodes.size()));
    nodes.push_back(TokenId::from_address(address, symbol));
  }
  std::vector<TokenGraph::Edge> edges;
  edges.reserve(acc.weights.size());
  for (const auto& [pair, weight] : acc.weights) {
    edges.push_back(TokenGraph::Edge{index.at(pair.first), index.at(pair.second), weight});
  }
  return TokenGraphAccess::make(std::move(platform), slice, weighted, std::move(nodes),
                                std::move(edges));
}

}  // namespace

void TokenGraph::Builder::add(const TokenId& x, const TokenId& y, EdgeWeight weight) {
  if (x == y) {
    throw InvalidArgumentError("self-loops are not representable");
  }
  remember_symbol(symbols_, x);
  remember_symbol(symbols_, y);
  const TokenId& lo = x < y ? x : y;
  const TokenId& hi = x < y ? y : x;
  weights_[{lo.address(), hi.address()}] += weight;
}

TokenGraph TokenGraph::Builder::build(Platform platform, SliceIndex slice, bool weighted) && {
  EdgeAccumulator acc;
  acc.symbols = std::move(symbols_);
  acc.weights = std::move(weights_);
  return assemble(std::move(acc), std::move(platform), slice, weighted);
}

EdgeWeight TokenGraph::weighted_degree(NodeIndex i) const {
  EdgeWeight sum = 0;
  for (const auto& [nbr, w] : adjacency_[i]) {
    (void)nbr;
    sum += w;
  }
  return sum;
}

std::optional<NodeIndex> TokenGraph::index_of(std::string_view address) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), address,
                             [](const TokenId& t, std::string_view a) { return t.address() < a; });
  if (it == nodes_.end() || it->address() != address) {
    return std::nullopt;
  }
  return static_cast<NodeIndex>(it - nodes_.begin());
}

std::optional<EdgeWeight> TokenGraph::edge_weight(NodeIndex a, NodeIndex b) const {
  const auto& nbrs = adjacency_[a];
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                             [](const Neighbor& n, NodeIndex idx) { return n.first < idx; });
  if (it == nbrs.end() || it->first != b) {
    return std::nullopt;
  }
  return it->second;
}

TokenGraph build_graph(std::span<const EdgeEvent> events, const TimeSegmentation& seg,
                       SliceIndex slice, const Platform& platform, bool weighted) {
  if (slice.value() > seg.segment_count()) {
    throw OutOfRangeError(
        fmt::format("slice {} exceeds segment count {}", slice.value(), seg.segment_count()));
  }
  EdgeAccumulator acc;
  for (const EdgeEvent& event : events) {
    if (event.platform != platform) {
      continue;
    }
    if (!slice.is_whole()) {
      if (event.block < seg.segment_begin(slice.value()) ||
          event.block >= seg.segment_end(slice.value())) {
        continue;
      }
    }
    acc.add(event.a, event.b, 1);
  }
  return assemble(std::move(acc), platform, slice, weighted);
}

TokenGraph induced_subgraph(const TokenGraph& g, std::span<const NodeIndex> keep) {
  std::vector<bool> kept(g.node_count(), false);
  for (NodeIndex i : keep) {
    kept.at(i) = true;
  }
  std::vector<TokenId> nodes;
  std::vector<NodeIndex> remap(g.node_count(), 0);
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (kept[i]) {
      remap[i] = static_cast<NodeIndex>(nodes.size());
      nodes.push_back(g.node(i));
    }
  }
  std::vector<TokenGraph::Edge> edges;
  for (const auto& e : g.edges()) {
    if (kept[e.a] && kept[e.b]) {
      edges.push_back(TokenGraph::Edge{remap[e.a], remap[e.b], e.weight});
    }
  }
  return TokenGraphAccess::make(g.platform(), g.slice(), g.weighted(), std::move(nodes),
                                std::move(edges));
}

TokenGraph filter_min_degree(const TokenGraph& g, std::size_t d) {
  if (d == 0) {
    throw InvalidArgumentError("minimum degree must be positive");
  }
  std::vector<NodeIndex> keep;
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (g.degree(i) >= d) {
      keep.push_back(i);
    }
  }
  return induced_subgraph(g, keep);
}

std::vector<TokenGraph> slice_series(std::span<const EdgeEvent> events,
                                     const TimeSegmentation& seg, const Platform& platform,
                                     bool weighted) {
  std::vector<TokenGraph> series;
  series.reserve(seg.segment_count());
  for (std::size_t i = 1; i <= seg.segment_count(); ++i) {
    series.push_back(build_graph(events, seg, SliceIndex(i), platform, weighted));
  }
  return series;
}

TokenGraph combine_slices(std::span<const TokenGraph> series) {
  if (series.empty()) {
    throw InvalidArgumentError("cannot combine an empty series");
  }
  EdgeAccumulator acc;
  for (const TokenGraph& g : series) {
    for (const auto& e : g.edges()) {
      acc.add(g.node(e.a), g.node(e.b), e.weight);
    }
    // Filtered graphs can hold edge-less nodes; keep those too.
    for (const TokenId& t : g.nodes()) {
      remember_symbol(acc.symbols, t);
    }
  }
  return assemble(std::move(acc), series.front().platform(), SliceIndex::whole(),
                  series.front().weighted());
}

GraphBundle::GraphBundle(Platform platform, TimeSegmentation seg, bool weighted,
                         std::vector<TokenId> tokens,
                         std::vector<std::vector<SliceEdge>> slice_edges)
    : platform_(std::move(platform)),
      seg_(std::move(seg)),
      weighted_(weighted),
      tokens_(std::move(tokens)),
      slice_edges_(std::move(slice_edges)) {
  if (slice_edges_.size() != seg_.segment_count()) {
    throw InvalidArgumentError("bundle slice count does not match segmentation");
  }
  for (std::size_t i = 1; i < tokens_.size(); ++i) {
    if (!(tokens_[i - 1].address() < tokens_[i].address())) {
      throw InvalidArgumentError("bundle tokens must be unique and ascending by address");
    }
  }
  for (const auto& slice : slice_edges_) {
    for (const SliceEdge& e : slice) {
      if (e.a >= e.b || e.b >= tokens_.size()) {
        throw InvalidArgumentError("bundle edge endpoints must satisfy a < b < token count");
      }
      if (e.weight == 0) {
        throw InvalidArgumentError("bundle edge weight must be positive");
      }
    }
  }
}

GraphBundle GraphBundle::from_events(std::span<const EdgeEvent> events, TimeSegmentation seg,
                                     Platform platform, bool weighted) {
  std::map<std::string, std::string> symbols;
  for (const EdgeEvent& e : events) {
    if (e.platform != platform) {
      continue;
    }
    remember_symbol(symbols, e.a);
    remember_symbol(symbols, e.b);
  }
  std::vector<TokenId> tokens;
  tokens.reserve(symbols.size());
  std::map<std::string, NodeIndex> index;
  for (auto& [address, symbol] : symbols) {
    index.emplace(address, static_cast<NodeIndex>(tokens.size()));
    tokens.push_back(TokenId::from_address(address, symbol));
  }

  std::vector<std::map<std::pair<NodeIndex, NodeIndex>, EdgeWeight>> acc(seg.segment_count());
  for (const EdgeEvent& e : events) {
    if (e.platform != platform) {
      continue;
    }
    const std::size_t slice = slice_of_block(seg, e.block).value();
    const NodeIndex ia = index.at(e.a.address());
    const NodeIndex ib = index.at(e.b.address());
    acc[slice - 1][{ia, ib}] += 1;
  }
  std::vector<std::vector<SliceEdge>> slice_edges(seg.segment_count());
  for (std::size_t s = 0; s < acc.size(); ++s) {
    slice_edges[s].reserve(acc[s].size());
    for (const auto& [pair, w] : acc[s]) {
      slice_edges[s].push_back(SliceEdge{pair.first, pair.second, w});
    }
  }
  return GraphBundle(std::move(platform), std::move(seg), weighted, std::move(tokens),
                     std::move(slice_edges));
}

TokenGraph GraphBundle::graph(SliceIndex slice) const {
  if (slice.value() > slice_count()) {
    throw OutOfRangeError(
        fmt::format("slice {} exceeds segment count {}", slice.value(), slice_count()));
  }
  std::map<std::pair<NodeIndex, NodeIndex>, EdgeWeight> acc;
  if (slice.is_whole()) {
    for (const auto& edges : slice_edges_) {
      for (const auto& e : edges) {
        acc[{e.a, e.b}] += e.weight;
      }
    }
  } else {
    for (const auto& e : slice_edges_[slice.value() - 1]) {
      acc[{e.a, e.b}] += e.weight;
    }
  }
  // Compact to the nodes that appear in this slice.
  std::vector<NodeIndex> remap(tokens_.size(), 0);
  std::vector<bool> present(tokens_.size(), false);
  for (const auto& [pair, w] : acc) {
    (void)w;
    present[pair.first] = true;
    present[pair.second] = true;
  }
  std::vector<TokenId> nodes;
  for (NodeIndex i = 0; i < tokens_.size(); ++i) {
    if (present[i]) {
      remap[i] = static_cast<NodeIndex>(nodes.size());
      nodes.push_back(tokens_[i]);
    }
  }
  std::vector<TokenGraph::Edge> edges;
  edges.reserve(acc.size());
  for (const auto& [pair, w] : acc) {
    edges.push_back(TokenGraph::Edge{remap[pair.first], remap[pair.second], w});
  }
  return TokenGraphAccess::make(platform_, slice, weighted_, std::move(nodes), std::move(edges));
}

std::vector<TokenGraph> GraphBundle::series() const {
  std::vector<TokenGraph> out;
  out.reserve(slice_count());
  for (std::size_t i = 1; i <= slice_count(); ++i) {
    out.push_back(graph(SliceIndex(i)));
  }
  return out;
}

}  // namespace dexnet

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "dexnet/graph.hpp"

namespace dexnet {

/// Connected components sorted by descending size; ties broken by smallest
/// member address. components[0] is the giant component. Members are listed
/// in ascending node-index (= address) order.
struct ComponentDecomposition {
  std::vector<std::vector<NodeIndex>> components;

  const std::vector<NodeIndex>& giant() const { return components.front(); }
  std::size_t count() const { return components.size(); }
};

/// Degree -> node count. Zero-count degrees are never stored; degree 0 can
/// appear only for graphs that went through filtering.
struct DegreeHistogram {
  std::map<std::size_t, std::size_t> counts;
};

/// Diameter of the giant component against ln of the whole graph's node count.
struct SmallWorldReport {
  std::size_t n = 0;
  std::size_t diameter_of_giant = 0;
  double ln_n = 0.0;
  double ratio = 0.0;
};

/// Per-slice |E|/|V| over the nonempty slices of a series, with mean and
/// population variance. Empty slices are excluded and counted.
struct RatioSeries {
  struct Entry {
    std::size_t slice = 0;  // 1-based slice id
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double ratio = 0.0;
  };
  std::vector<Entry> values;
  double mean = 0.0;
  double variance = 0.0;  // population variance over nonempty slices
  std::size_t empty_slices = 0;
};

/// 2|E|/|V| on counts alone; shared by the graph overload and report tooling.
double average_degree_value(std::size_t nodes, std::size_t edges);
/// |E| / C(|V|, 2) on counts alone.
double density_value(std::size_t nodes, std::size_t edges);

/// Average unweighted degree, 2|E|/|V|. Throws UndefinedMetricError on an
/// empty graph.
double average_degree(const TokenGraph& g);

/// Edge count over the maximum possible, |E|/C(|V|,2), on the unweighted
/// structure. Throws UndefinedMetricError when |V| < 2.
double density(const TokenGraph& g);

ComponentDecomposition connected_components(const TokenGraph& g);

/// Exact diameter via BFS from every node. Throws NotConnectedError unless
/// the graph is connected (callers pass the giant component). BFS sources
/// are processed in parallel with a deterministic max reduction.
std::size_t diameter(const TokenGraph& g);

/// Sampling fallback for very large graphs: max eccentricity over `seeds`
/// BFS sources chosen by the seeded generator. A lower bound on the true
/// diameter; same connectivity requirement as `diameter`.
std::size_t diameter_lower_bound(const TokenGraph& g, std::size_t seeds, std::uint64_t seed);

DegreeHistogram degree_distribution(const TokenGraph& g);

/// Diameter of the giant component vs ln(|V|). Throws UndefinedMetricError
/// when the giant component has fewer than 2 nodes.
SmallWorldReport small_world_report(const TokenGraph& g);

/// Ratio series over a t_1..t_n slice series. Throws UndefinedMetricError
/// when every slice is empty.
RatioSeries ratio_series(std::span<const TokenGraph> series);

}  // namespace dexnet

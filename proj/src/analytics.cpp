#include "dexnet/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <queue>
#include <random>
#include <thread>

namespace dexnet {

namespace {

/// One BFS; returns the eccentricity of `source` or the node count visited.
struct BfsScratch {
  std::vector<std::uint32_t> dist;
  std::vector<NodeIndex> frontier;
  std::vector<NodeIndex> next;

  // Returns {eccentricity, visited count}.
  std::pair<std::size_t, std::size_t> run(const TokenGraph& g, NodeIndex source) {
    dist.assign(g.node_count(), UINT32_MAX);
    frontier.clear();
    next.clear();
    dist[source] = 0;
    frontier.push_back(source);
    std::size_t visited = 1;
    std::size_t level = 0;
    while (!frontier.empty()) {
      next.clear();
      for (NodeIndex u : frontier) {
        for (const auto& [v, w] : g.neighbors(u)) {
          (void)w;
          if (dist[v] == UINT32_MAX) {
            dist[v] = static_cast<std::uint32_t>(level + 1);
            next.push_back(v);
            ++visited;
          }
        }
      }
      if (!next.empty()) {
        ++level;
      }
      std::swap(frontier, next);
    }
    return {level, visited};
  }
};

std::size_t max_eccentricity_over(const TokenGraph& g, std::span<const NodeIndex> sources) {
  const std::size_t n_threads =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), sources.size());
  if (n_threads <= 1) {
    BfsScratch scratch;
    std::size_t best = 0;
    for (NodeIndex s : sources) {
      auto [ecc, visited] = scratch.run(g, s);
      if (visited != g.node_count()) {
        throw NotConnectedError("diameter requires a connected graph");
      }
      best = std::max(best, ecc);
    }
    return best;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::size_t> partial(n_threads, 0);
  std::atomic<bool> disconnected{false};
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t] {
      BfsScratch scratch;
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= sources.size() || disconnected.load()) {
          return;
        }
        auto [ecc, visited] = scratch.run(g, sources[i]);
        if (visited != g.node_count()) {
          disconnected.store(true);
          return;
        }
        partial[t] = std::max(partial[t], ecc);
      }
    });
  }
  for (auto& w : workers) {
    w.join();
  }
  if (disconnected.load()) {
    throw NotConnectedError("diameter requires a connected graph");
  }
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace

double average_degree_value(std::size_t nodes, std::size_t edges) {
  if (nodes == 0) {
    throw UndefinedMetricError("average degree undefined on an empty graph");
  }
  return 2.0 * static_cast<double>(edges) / static_cast<double>(nodes);
}

double density_value(std::size_t nodes, std::size_t edges) {
  if (nodes < 2) {
    throw UndefinedMetricError("density undefined with fewer than 2 nodes");
  }
  const double possible =
      static_cast<double>(nodes) * static_cast<double>(nodes - 1) / 2.0;
  return static_cast<double>(edges) / possible;
}

double average_degree(const TokenGraph& g) {
  return average_degree_value(g.node_count(), g.edge_count());
}

double density(const TokenGraph& g) { return density_value(g.node_count(), g.edge_count()); }

ComponentDecomposition connected_components(const TokenGraph& g) {
  ComponentDecomposition out;
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeIndex> stack;
  for (NodeIndex start = 0; start < g.node_count(); ++start) {
    if (seen[start]) {
      continue;
    }
    std::vector<NodeIndex> comp;
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeIndex u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const auto& [v, w] : g.neighbors(u)) {
        (void)w;
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.components.push_back(std::move(comp));
  }
  // Size descending; ties by smallest member address, i.e. smallest index.
  std::sort(out.components.begin(), out.components.end(),
            [](const std::vector<NodeIndex>& a, const std::vector<NodeIndex>& b) {
              if (a.size() != b.size()) {
                return a.size() > b.size();
              }
              return a.front() < b.front();
            });
  return out;
}

std::size_t diameter(const TokenGraph& g) {
  if (g.node_count() == 0) {
    throw NotConnectedError("diameter undefined on an empty graph");
  }
  std::vector<NodeIndex> sources(g.node_count());
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    sources[i] = i;
  }
  return max_eccentricity_over(g, sources);
}

std::size_t diameter_lower_bound(const TokenGraph& g, std::size_t seeds, std::uint64_t seed) {
  if (g.node_count() == 0) {
    throw NotConnectedError("diameter undefined on an empty graph");
  }
  if (seeds == 0) {
    throw InvalidArgumentError("need at least one BFS seed");
  }
  seeds = std::min(seeds, g.node_count());
  std::mt19937_64 rng(seed);
  std::vector<NodeIndex> sources;
  sources.reserve(seeds);
  for (std::size_t i = 0; i < seeds; ++i) {
    sources.push_back(static_cast<NodeIndex>(rng() % g.node_count()));
  }
  return max_eccentricity_over(g, sources);
}

DegreeHistogram degree_distribution(const TokenGraph& g) {
  DegreeHistogram hist;
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    ++hist.counts[g.degree(i)];
  }
  return hist;
}

SmallWorldReport small_world_report(const TokenGraph& g) {
  ComponentDecomposition comps = connected_components(g);
  if (comps.components.empty() || comps.giant().size() < 2) {
    throw UndefinedMetricError("small-world report needs a giant component of at least 2 nodes");
  }
  SmallWorldReport report;
  report.n = g.node_count();
  TokenGraph giant = induced_subgraph(g, comps.giant());
  report.diameter_of_giant = diameter(giant);
  report.ln_n = std::log(static_cast<double>(report.n));
  report.ratio = static_cast<double>(report.diameter_of_giant) / report.ln_n;
  return report;
}

RatioSeries ratio_series(std::span<const TokenGraph> series) {
  RatioSeries out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const TokenGraph& g = series[i];
    if (g.node_count() == 0) {
      ++out.empty_slices;
      continue;
    }
    RatioSeries::Entry entry;
    entry.slice = i + 1;
    entry.nodes = g.node_count();
    entry.edges = g.edge_count();
    entry.ratio = static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
    out.values.push_back(entry);
  }
  if (out.values.empty()) {
    throw UndefinedMetricError("ratio series undefined: every slice is empty");
  }
  double sum = 0.0;
  for (const auto& e : out.values) {
    sum += e.ratio;
  }
  out.mean = sum / static_cast<double>(out.values.size());
  double sq = 0.0;
  for (const auto& e : out.values) {
    const double d = e.ratio - out.mean;
    sq += d * d;
  }
  out.variance = sq / static_cast<double>(out.values.size());
  return out;
}

}  // namespace dexnet

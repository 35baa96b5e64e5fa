#include "dexnet/communities.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "dexnet/error.hpp"
#include "dexnet/rand_util.hpp"

namespace dexnet {

namespace {

/// Aggregated working graph. Unlike TokenGraph this one allows self-loops,
/// which appear once communities collapse into super-nodes. A self-loop of
/// weight w contributes 2w to its node's weighted degree.
struct WorkGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> self_loop;
  double total_weight = 0.0;  // W: every edge once, self-loops once

  std::size_t size() const { return adj.size(); }

  double weighted_degree(std::size_t i) const {
    double k = 2.0 * self_loop[i];
    for (const auto& [j, w] : adj[i]) {
      k += w;
    }
    return k;
  }
};

WorkGraph from_token_graph(const TokenGraph& g) {
  WorkGraph wg;
  wg.adj.resize(g.node_count());
  wg.self_loop.assign(g.node_count(), 0.0);
  for (const auto& e : g.edges()) {
    const double w = static_cast<double>(e.weight);
    wg.adj[e.a].emplace_back(e.b, w);
    wg.adj[e.b].emplace_back(e.a, w);
    wg.total_weight += w;
  }
  return wg;
}

/// One local-moving phase over `wg`, starting from the partition already in
/// `comm` (identity = the classic singleton start). Every node repeatedly
/// moves to the neighboring community with the best modularity gain; when
/// even staying put scores negative, the node splits off into an empty
/// community instead. Community ids stay within [0, n). Returns whether any
/// node moved.
bool local_moving(const WorkGraph& wg, double resolution, std::mt19937_64& rng,
                  std::vector<std::size_t>& comm) {
  const std::size_t n = wg.size();
  if (wg.total_weight == 0.0) {
    return false;
  }

  std::vector<double> k(n);
  std::vector<double> tot(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = wg.weighted_degree(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    tot[comm[i]] += k[i];
    ++members[comm[i]];
  }
  std::vector<std::size_t> free_ids;
  for (std::size_t c = 0; c < n; ++c) {
    if (members[c] == 0) {
      free_ids.push_back(c);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  const double two_w = 2.0 * wg.total_weight;
  std::vector<double> weight_to(n, 0.0);
  std::vector<std::size_t> touched;

  bool any_move = false;
  bool moved_this_pass = true;
  while (moved_this_pass) {
    moved_this_pass = false;
    // A fresh order per pass keeps one unlucky sequence from trapping every
    // pass the same way.
    shuffle_in_place(order, rng);
    for (std::size_t i : order) {
      const std::size_t c_old = comm[i];
      touched.clear();
      for (const auto& [j, w] : wg.adj[i]) {
        const std::size_t c = comm[j];
        if (weight_to[c] == 0.0) {
          touched.push_back(c);
        }
        weight_to[c] += w;
      }
      tot[c_old] -= k[i];
      --members[c_old];

      // Gain of joining community c, scaled by W (ordering is unaffected):
      // k_{i,c} - resolution * tot(c) * k_i / 2W.
      auto gain = [&](std::size_t c) {
        return weight_to[c] - resolution * tot[c] * k[i] / two_w;
      };
      std::sort(touched.begin(), touched.end());
      std::size_t best_c = c_old;
      double best_gain = gain(c_old);
      for (std::size_t c : touched) {
        if (c == c_old) {
          continue;
        }
        const double g = gain(c);
        if (g > best_gain + 1e-12) {
          best_gain = g;
          best_c = c;
        }
      }
      // An empty community scores exactly zero. With the node detached there
      // are at most n - 1 occupied ids, so a free one always exists.
      if (best_gain < -1e-12 && members[c_old] > 0 && !free_ids.empty()) {
        best_c = free_ids.back();
        free_ids.pop_back();
      }

      tot[best_c] += k[i];
      ++members[best_c];
      comm[i] = best_c;
      if (best_c != c_old) {
        moved_this_pass = true;
        any_move = true;
        if (members[c_old] == 0) {
          free_ids.push_back(c_old);
        }
      }
      for (std::size_t c : touched) {
        weight_to[c] = 0.0;
      }
      weight_to[c_old] = 0.0;  // c_old may have had no incident edge
    }
  }
  return any_move;
}

/// Collapses communities into super-nodes. `comm` is relabeled densely in
/// ascending old-id order; returns the dense map applied.
WorkGraph aggregate(const WorkGraph& wg, std::vector<std::size_t>& comm) {
  std::vector<std::size_t> ids = comm;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::size_t> dense(wg.size(), 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    dense[ids[i]] = i;
  }
  for (std::size_t& c : comm) {
    c = dense[c];
  }

  WorkGraph out;
  out.adj.resize(ids.size());
  out.self_loop.assign(ids.size(), 0.0);
  out.total_weight = wg.total_weight;
  std::map<std::pair<std::size_t, std::size_t>, double> between;
  for (std::size_t i = 0; i < wg.size(); ++i) {
    const std::size_t ci = comm[i];
    out.self_loop[ci] += wg.self_loop[i];
    for (const auto& [j, w] : wg.adj[i]) {
      if (j < i) {
        continue;  // each undirected edge once
      }
      const std::size_t cj = comm[j];
      if (ci == cj) {
        out.self_loop[ci] += w;
      } else {
        between[{std::min(ci, cj), std::max(ci, cj)}] += w;
      }
    }
  }
  for (const auto& [pair, w] : between) {
    out.adj[pair.first].emplace_back(pair.second, w);
    out.adj[pair.second].emplace_back(pair.first, w);
  }
  return out;
}

/// One full run with a given visit-order stream. Alternates two phases until
/// neither moves a node: single-node refinement over the original graph
/// starting from the current partition (the classic singleton start on the
/// first round), then the aggregation hierarchy on top of the result. The
/// refinement can pull individual nodes back out of a merge the hierarchy
/// itself could only undo wholesale. Returns the community of every original
/// node; every accepted move strictly raises modularity, so the loop ends.
std::vector<std::size_t> louvain_once(const TokenGraph& g, double resolution,
                                      std::uint64_t run_seed) {
  std::mt19937_64 rng(run_seed);
  const WorkGraph base = from_token_graph(g);
  // node_comm[i] = current community of original node i, tracked through
  // every aggregation level.
  std::vector<std::size_t> node_comm(g.node_count());
  std::iota(node_comm.begin(), node_comm.end(), std::size_t{0});

  while (true) {
    const bool refined = local_moving(base, resolution, rng, node_comm);

    WorkGraph wg = aggregate(base, node_comm);
    bool hierarchy_moved = false;
    std::vector<std::size_t> level_comm(wg.size());
    std::iota(level_comm.begin(), level_comm.end(), std::size_t{0});
    while (local_moving(wg, resolution, rng, level_comm)) {
      hierarchy_moved = true;
      wg = aggregate(wg, level_comm);
      for (std::size_t& c : node_comm) {
        c = level_comm[c];
      }
      level_comm.resize(wg.size());
      std::iota(level_comm.begin(), level_comm.end(), std::size_t{0});
    }
    if (!refined && !hierarchy_moved) {
      return node_comm;
    }
  }
}

}  // namespace

CommunityAssignment louvain(const TokenGraph& g, double resolution, std::uint64_t seed) {
  if (g.node_count() == 0) {
    throw InvalidArgumentError("community detection needs at least one node");
  }
  // Greedy local moving is visit-order dependent and can wedge itself into a
  // poor merge on small graphs, so the search restarts from several derived
  // visit orders and keeps the best-scoring partition. Ties keep the earliest
  // restart, which makes the whole procedure a pure function of the seed.
  constexpr std::size_t kRestarts = 32;
  constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ull;

  CommunityAssignment best;
  for (std::size_t r = 0; r < kRestarts; ++r) {
    const std::vector<std::size_t> node_comm = louvain_once(g, resolution, seed + kSeedStride * r);

    CommunityAssignment candidate;
    candidate.tokens.assign(g.nodes().begin(), g.nodes().end());
    candidate.seed = seed;
    // Dense labels by first appearance in node order.
    candidate.labels.resize(g.node_count());
    std::map<std::size_t, std::size_t> first_seen;
    for (std::size_t i = 0; i < node_comm.size(); ++i) {
      auto [it, inserted] = first_seen.try_emplace(node_comm[i], first_seen.size());
      candidate.labels[i] = it->second;
    }
    candidate.community_count = first_seen.size();
    candidate.modularity = modularity(g, candidate, resolution);
    if (r == 0 || candidate.modularity > best.modularity) {
      best = std::move(candidate);
    }
  }
  return best;
}

double modularity(const TokenGraph& g, const CommunityAssignment& assignment, double resolution) {
  if (assignment.labels.size() != g.node_count() ||
      assignment.tokens.size() != g.node_count()) {
    throw InvalidAssignmentError("assignment does not label every node of the graph");
  }
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (assignment.tokens[i].address() != g.node(i).address()) {
      throw InvalidAssignmentError("assignment labels a different node set than the graph");
    }
  }
  const double total = static_cast<double>(g.total_weight());
  if (total == 0.0) {
    return 0.0;
  }

  const std::size_t c_max =
      assignment.labels.empty()
          ? 0
          : *std::max_element(assignment.labels.begin(), assignment.labels.end()) + 1;
  std::vector<double> w_in(c_max, 0.0);
  std::vector<double> w_tot(c_max, 0.0);
  for (const auto& e : g.edges()) {
    const double w = static_cast<double>(e.weight);
    if (assignment.labels[e.a] == assignment.labels[e.b]) {
      w_in[assignment.labels[e.a]] += w;
    }
  }
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    w_tot[assignment.labels[i]] += static_cast<double>(g.weighted_degree(i));
  }

  double q = 0.0;
  for (std::size_t c = 0; c < c_max; ++c) {
    const double frac_tot = w_tot[c] / (2.0 * total);
    q += w_in[c] / total - resolution * frac_tot * frac_tot;
  }
  return q;
}

}  // namespace dexnet

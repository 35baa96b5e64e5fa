#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dexnet/graph.hpp"

namespace dexnet {

/// Eigenvector centrality scores for one graph. `tokens[i]` carries the score
/// `scores[i]`; the score vector has Euclidean norm 1 on success. When the
/// iteration hits max_iter without stabilizing, `converged` is false and a
/// warning has been written to stderr; callers decide whether to proceed.
struct CentralityVector {
  Platform platform;
  SliceIndex slice;
  std::vector<TokenId> tokens;
  std::vector<double> scores;
  std::size_t iterations = 0;
  bool converged = true;

  std::optional<double> score_of(std::string_view address) const;
};

struct RankedToken {
  TokenId token;
  double score = 0.0;
};

/// Raw and normalized per-slice centrality of one token across a series.
/// Only slices where the token appears contribute points; `normalized` is
/// raw divided by the mean raw score over those slices, so the normalized
/// values average to 1.
struct CentralityTimeSeries {
  struct Point {
    std::size_t slice = 0;  // 1-based slice id
    double raw = 0.0;
    double normalized = 0.0;
  };
  TokenId token;
  std::vector<Point> points;
  std::size_t total_slices = 0;
  double mean_raw = 0.0;
};

/// A slice where a token's normalized centrality exceeded the threshold.
struct AnomalyFlag {
  TokenId token;
  std::size_t slice = 0;  // 1-based slice id
  double raw = 0.0;
  double normalized = 0.0;
  double threshold = 0.0;
  std::size_t global_rank = 0;  // 1-based rank in the whole-range graph, 0 if absent
};

struct AnomalyReport {
  std::vector<AnomalyFlag> flags;
  // Count of centrality runs (per-slice plus the whole-range ranking run)
  // that hit max_iter without converging.
  std::size_t nonconverged_runs = 0;
};

/// Power iteration on the weighted adjacency from a uniform positive start,
/// renormalized every step, stopping when the largest per-coordinate change
/// drops below tol. Iterates the shifted operator cI + A with c = 1 + max
/// weighted degree: same dominant eigenvector as A, but it cannot oscillate
/// on bipartite graphs, where +/- eigenvalue pairs tie in magnitude. All
/// accumulation is done in a label-independent order, so relabeling nodes
/// permutes the scores bit-for-bit. Throws UndefinedMetricError on an empty
/// graph. Non-convergence sets converged=false and warns on stderr.
CentralityVector eigenvector_centrality(const TokenGraph& g, double tol = 1e-10,
                                        std::size_t max_iter = 1000);

/// Same iteration run on each connected component separately, each component
/// normalized to unit length on its own. Avoids the mass-concentration effect
/// where the whole-graph vector underflows on all but the strongest component.
/// The combined vector does not have unit norm overall.
CentralityVector eigenvector_centrality_per_component(const TokenGraph& g, double tol = 1e-10,
                                                      std::size_t max_iter = 1000);

/// Top k tokens by score descending, ties by address ascending. Returns fewer
/// than k when the graph is smaller; k = 0 yields an empty list.
std::vector<RankedToken> top_k(const CentralityVector& cv, std::size_t k);

/// Centrality of every slice in a t_1..t_n series. Empty slices produce an
/// empty CentralityVector (no tokens, converged). Slices are processed in
/// parallel; results are positionally deterministic.
std::vector<CentralityVector> slice_centralities(std::span<const TokenGraph> series,
                                                 double tol = 1e-10, std::size_t max_iter = 1000);

/// Extracts one token's trajectory from precomputed slice centralities.
/// Throws EmptySeriesError when the token appears in no slice and
/// UndefinedMetricError when its mean raw score is zero.
CentralityTimeSeries centrality_time_series(std::span<const CentralityVector> per_slice,
                                            const TokenId& token);

/// Convenience overload computing slice centralities internally.
CentralityTimeSeries centrality_time_series(std::span<const TokenGraph> series,
                                            const TokenId& token, double tol = 1e-10,
                                            std::size_t max_iter = 1000);

/// Flags (token, slice) pairs whose normalized centrality exceeds `threshold`.
/// Tokens must appear in at least min_slices slices and must not sit in the
/// top exclude_global_top of the whole-range ranking, since persistent hubs
/// are central by nature and would drown out genuine spikes. Output is sorted
/// by normalized score descending, ties by address then slice. Throws
/// InvalidArgumentError unless threshold > 1.
AnomalyReport detect_anomalies(std::span<const TokenGraph> series, double threshold = 5.0,
                               std::size_t min_slices = 5, std::size_t exclude_global_top = 5,
                               double tol = 1e-10, std::size_t max_iter = 1000);

}  // namespace dexnet

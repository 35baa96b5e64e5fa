#include "dexnet/centrality.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "dexnet/analytics.hpp"
#include "dexnet/error.hpp"

namespace dexnet {

namespace {

std::mutex warn_mutex;

void warn_nonconvergence(const TokenGraph& g, std::size_t max_iter) {
  std::lock_guard<std::mutex> lock(warn_mutex);
  fmt::print(stderr,
             "warning: eigenvector centrality did not converge after {} iterations "
             "(platform={}, slice=t_{}, nodes={})\n",
             max_iter, g.platform().name(), g.slice().value(), g.node_count());
}

/// Sums values in ascending order. The multiset of addends is the same no
/// matter how the graph's nodes are labeled, so sorting first makes the
/// floating-point result identical across relabelings.
double stable_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) {
    acc += t;
  }
  return acc;
}

/// Core loop: iterate x <- normalize((cI + A) x) until the largest coordinate
/// change falls under tol, with c = 1 + max weighted degree. The shift keeps
/// every iterate positive, so the sequence cannot oscillate between the two
/// sides of a bipartite graph, and because c bounds the spectral radius the
/// most negative eigenvalue of A maps near zero instead of near -c, which
/// keeps convergence fast on hub-heavy graphs. The limit is the dominant
/// eigenvector of A itself; shifting changes eigenvalues, not eigenvectors.
/// Returns {iterations, converged}; scores land in x.
std::pair<std::size_t, bool> power_iterate(const TokenGraph& g, std::vector<double>& x,
                                           double tol, std::size_t max_iter) {
  const std::size_t n = g.node_count();
  x.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  EdgeWeight max_wdeg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    max_wdeg = std::max(max_wdeg, g.weighted_degree(static_cast<NodeIndex>(i)));
  }
  const double shift = 1.0 + static_cast<double>(max_wdeg);
  std::vector<double> y(n);
  std::vector<double> terms;
  std::vector<double> squares(n);
  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      terms.clear();
      for (const auto& [j, w] : g.neighbors(static_cast<NodeIndex>(i))) {
        terms.push_back(static_cast<double>(w) * x[j]);
      }
      y[i] = shift * x[i] + stable_sum(terms);
    }
    for (std::size_t i = 0; i < n; ++i) {
      squares[i] = y[i] * y[i];
    }
    const double norm = std::sqrt(stable_sum(squares));
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      delta = std::max(delta, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (delta < tol) {
      return {iter, true};
    }
  }
  return {max_iter, false};
}

}  // namespace

std::optional<double> CentralityVector::score_of(std::string_view address) const {
  // tokens are in ascending address order, same as the source graph.
  auto it = std::lower_bound(tokens.begin(), tokens.end(), address,
                             [](const TokenId& t, std::string_view a) { return t.address() < a; });
  if (it == tokens.end() || it->address() != address) {
    return std::nullopt;
  }
  return scores[static_cast<std::size_t>(it - tokens.begin())];
}

CentralityVector eigenvector_centrality(const TokenGraph& g, double tol, std::size_t max_iter) {
  if (g.node_count() == 0) {
    throw UndefinedMetricError("eigenvector centrality undefined on an empty graph");
  }
  CentralityVector cv;
  cv.platform = g.platform();
  cv.slice = g.slice();
  cv.tokens.assign(g.nodes().begin(), g.nodes().end());
  auto [iters, ok] = power_iterate(g, cv.scores, tol, max_iter);
  cv.iterations = iters;
  cv.converged = ok;
  if (!ok) {
    warn_nonconvergence(g, max_iter);
  }
  return cv;
}

CentralityVector eigenvector_centrality_per_component(const TokenGraph& g, double tol,
                                                      std::size_t max_iter) {
  if (g.node_count() == 0) {
    throw UndefinedMetricError("eigenvector centrality undefined on an empty graph");
  }
  CentralityVector cv;
  cv.platform = g.platform();
  cv.slice = g.slice();
  cv.tokens.assign(g.nodes().begin(), g.nodes().end());
  cv.scores.assign(g.node_count(), 0.0);
  cv.converged = true;
  ComponentDecomposition comps = connected_components(g);
  std::vector<double> local;
  for (const auto& comp : comps.components) {
    TokenGraph sub = induced_subgraph(g, comp);
    auto [iters, ok] = power_iterate(sub, local, tol, max_iter);
    cv.iterations = std::max(cv.iterations, iters);
    if (!ok) {
      cv.converged = false;
      warn_nonconvergence(sub, max_iter);
    }
    for (std::size_t i = 0; i < comp.size(); ++i) {
      cv.scores[comp[i]] = local[i];
    }
  }
  return cv;
}

std::vector<RankedToken> top_k(const CentralityVector& cv, std::size_t k) {
  std::vector<RankedToken> ranked;
  ranked.reserve(cv.tokens.size());
  for (std::size_t i = 0; i < cv.tokens.size(); ++i) {
    ranked.push_back({cv.tokens[i], cv.scores[i]});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedToken& a, const RankedToken& b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    return a.token.address() < b.token.address();
  });
  if (ranked.size() > k) {
    ranked.resize(k);
  }
  return ranked;
}

std::vector<CentralityVector> slice_centralities(std::span<const TokenGraph> series, double tol,
                                                 std::size_t max_iter) {
  std::vector<CentralityVector> out(series.size());
  const std::size_t n_threads =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), series.size());
  auto compute = [&](std::size_t i) {
    if (series[i].node_count() == 0) {
      out[i].platform = series[i].platform();
      out[i].slice = series[i].slice();
      return;
    }
    out[i] = eigenvector_centrality(series[i], tol, max_iter);
  };
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < series.size(); ++i) {
      compute(i);
    }
    return out;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= series.size()) {
          return;
        }
        compute(i);
      }
    });
  }
  for (auto& w : workers) {
    w.join();
  }
  return out;
}

CentralityTimeSeries centrality_time_series(std::span<const CentralityVector> per_slice,
                                            const TokenId& token) {
  CentralityTimeSeries ts;
  ts.token = token;
  ts.total_slices = per_slice.size();
  for (std::size_t i = 0; i < per_slice.size(); ++i) {
    if (auto score = per_slice[i].score_of(token.address())) {
      CentralityTimeSeries::Point p;
      p.slice = i + 1;
      p.raw = *score;
      ts.points.push_back(p);
    }
  }
  if (ts.points.empty()) {
    throw EmptySeriesError(
        fmt::format("token {} appears in no slice of the series", token.address()));
  }
  double sum = 0.0;
  for (const auto& p : ts.points) {
    sum += p.raw;
  }
  ts.mean_raw = sum / static_cast<double>(ts.points.size());
  if (ts.mean_raw == 0.0) {
    throw UndefinedMetricError(
        fmt::format("token {} has zero mean centrality; normalization undefined",
                    token.address()));
  }
  for (auto& p : ts.points) {
    p.normalized = p.raw / ts.mean_raw;
  }
  return ts;
}

CentralityTimeSeries centrality_time_series(std::span<const TokenGraph> series,
                                            const TokenId& token, double tol,
                                            std::size_t max_iter) {
  std::vector<CentralityVector> per_slice = slice_centralities(series, tol, max_iter);
  return centrality_time_series(per_slice, token);
}

AnomalyReport detect_anomalies(std::span<const TokenGraph> series, double threshold,
                               std::size_t min_slices, std::size_t exclude_global_top, double tol,
                               std::size_t max_iter) {
  if (!(threshold > 1.0)) {
    throw InvalidArgumentError("anomaly threshold must exceed 1");
  }
  AnomalyReport report;
  if (series.empty()) {
    return report;
  }

  TokenGraph global = combine_slices(series);
  std::map<std::string, std::size_t> global_rank;
  if (global.node_count() > 0) {
    CentralityVector gcv = eigenvector_centrality(global, tol, max_iter);
    if (!gcv.converged) {
      ++report.nonconverged_runs;
    }
    std::vector<RankedToken> ranking = top_k(gcv, gcv.tokens.size());
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      global_rank[ranking[r].token.address()] = r + 1;
    }
  }

  std::vector<CentralityVector> per_slice = slice_centralities(series, tol, max_iter);
  for (const auto& cv : per_slice) {
    if (!cv.converged) {
      ++report.nonconverged_runs;
    }
  }

  struct Accum {
    TokenId token;
    std::vector<std::pair<std::size_t, double>> raw;  // (1-based slice, score)
    double sum = 0.0;
  };
  std::map<std::string, Accum> by_token;
  for (std::size_t i = 0; i < per_slice.size(); ++i) {
    const CentralityVector& cv = per_slice[i];
    for (std::size_t j = 0; j < cv.tokens.size(); ++j) {
      Accum& acc = by_token[cv.tokens[j].address()];
      if (acc.raw.empty()) {
        acc.token = cv.tokens[j];
      }
      acc.raw.emplace_back(i + 1, cv.scores[j]);
      acc.sum += cv.scores[j];
    }
  }

  for (const auto& [address, acc] : by_token) {
    if (acc.raw.size() < min_slices) {
      continue;
    }
    auto rank_it = global_rank.find(address);
    const std::size_t rank = rank_it == global_rank.end() ? 0 : rank_it->second;
    if (rank != 0 && rank <= exclude_global_top) {
      continue;
    }
    const double mean = acc.sum / static_cast<double>(acc.raw.size());
    if (mean == 0.0) {
      // All-zero trajectories carry no signal to normalize against.
      continue;
    }
    for (const auto& [slice, raw] : acc.raw) {
      const double normalized = raw / mean;
      if (normalized > threshold) {
        AnomalyFlag flag;
        flag.token = acc.token;
        flag.slice = slice;
        flag.raw = raw;
        flag.normalized = normalized;
        flag.threshold = threshold;
        flag.global_rank = rank;
        report.flags.push_back(flag);
      }
    }
  }

  std::sort(report.flags.begin(), report.flags.end(),
            [](const AnomalyFlag& a, const AnomalyFlag& b) {
              if (a.normalized != b.normalized) {
                return a.normalized > b.normalized;
              }
              if (a.token.address() != b.token.address()) {
                return a.token.address() < b.token.address();
              }
              return a.slice < b.slice;
            });
  return report;
}

}  // namespace dexnet

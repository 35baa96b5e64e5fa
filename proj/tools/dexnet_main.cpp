#include <CLI11.hpp>
#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dexnet/analytics.hpp"
#include "dexnet/centrality.hpp"
#include "dexnet/communities.hpp"
#include "dexnet/core.hpp"
#include "dexnet/csv.hpp"
#include "dexnet/error.hpp"
#include "dexnet/graph.hpp"
#include "dexnet/graphml.hpp"
#include "dexnet/ingest.hpp"
#include "dexnet/io.hpp"
#include "dexnet/rpc.hpp"
#include "dexnet/statfit.hpp"
#include "dexnet/synth.hpp"

namespace fs = std::filesystem;
using namespace dexnet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNoConvergence = 3;

/// "start:end" block range flag.
BlockRange parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw InvalidArgumentError(fmt::format("range must be start:end, got \"{}\"", text));
  }
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  try {
    start = std::stoull(text.substr(0, colon));
    end = std::stoull(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw InvalidArgumentError(fmt::format("range bounds must be integers, got \"{}\"", text));
  }
  return BlockRange(start, end);
}

const std::string kRangePattern = R"(^\d+:\d+$)";

/// --slice accepts "all", or an integer where 0 means the whole range.
struct SliceSelection {
  bool all = false;
  SliceIndex one = SliceIndex::whole();
};

SliceSelection parse_slice_flag(const std::string& text) {
  SliceSelection sel;
  if (text == "all") {
    sel.all = true;
    return sel;
  }
  try {
    sel.one = SliceIndex(std::stoull(text));
  } catch (const std::exception&) {
    throw InvalidArgumentError(fmt::format("--slice must be an integer or \"all\", got \"{}\"",
                                           text));
  }
  return sel;
}

const std::string kSlicePattern = R"(^(all|\d+)$)";

/// Slices this selection addresses within a bundle, validated against it.
std::vector<SliceIndex> selected_slices(const SliceSelection& sel, const GraphBundle& bundle) {
  std::vector<SliceIndex> out;
  if (sel.all) {
    out.push_back(SliceIndex::whole());
    for (std::size_t i = 1; i <= bundle.slice_count(); ++i) {
      out.emplace_back(i);
    }
    return out;
  }
  if (sel.one.value() > bundle.slice_count()) {
    throw OutOfRangeError(fmt::format("slice {} exceeds the bundle's {} segments",
                                      sel.one.value(), bundle.slice_count()));
  }
  out.push_back(sel.one);
  return out;
}

void report_written(const fs::path& path) { fmt::print("wrote {}\n", path.string()); }

// ---------------------------------------------------------------- fetch-pools

struct FetchPoolsArgs {
  std::string rpc;
  std::string factory;
  std::string platform;
  std::string out;
  RpcOptions rpc_options;
  std::uint64_t timeout_ms = 30000;
};

int run_fetch_pools(const FetchPoolsArgs& args) {
  RpcOptions options = args.rpc_options;
  options.timeout = std::chrono::milliseconds(args.timeout_ms);
  const Platform platform = Platform::named(args.platform);
  PoolRegistry registry = fetch_pool_registry(args.rpc, args.factory, platform, options);
  write_pool_registry(args.out, registry);
  fmt::print("fetched {} pools ({} duplicates, {} self-paired rejected)\n", registry.size(),
             registry.duplicates(), registry.rejected_self_pairs());
  report_written(args.out);

  RunManifest manifest;
  manifest.command = "fetch-pools";
  manifest.add_parameter("rpc", args.rpc);
  manifest.add_parameter("factory", args.factory);
  manifest.add_parameter("platform", platform.name());
  manifest.add_parameter("parallelism", std::to_string(options.parallelism));
  manifest.add_parameter("batch_size", std::to_string(options.batch_size));
  manifest.add_parameter("max_retries", std::to_string(options.max_retries));
  manifest.add_parameter("timeout_ms", std::to_string(args.timeout_ms));
  manifest.add_output(args.out);
  write_manifest(manifest, args.out + ".manifest.json");
  return kExitOk;
}

// ---------------------------------------------------------------------- synth

struct SynthArgs {
  SynthParams params;
  std::string platform = "uniswap";
  std::string range = "1:1000000";
  std::string out_prefix;
};

int run_synth(const SynthArgs& args) {
  SynthParams params = args.params;
  params.platform = Platform::named(args.platform);
  params.range = parse_range(args.range);
  SynthStream stream = generate_stream(params);

  const fs::path pools_path = args.out_prefix + ".pools.jsonl";
  const fs::path transfers_path = args.out_prefix + ".transfers.jsonl";
  write_pool_registry(pools_path, stream.registry);
  write_transfers(transfers_path, stream.transfers);
  fmt::print("generated {} pools, {} transfers\n", stream.registry.size(),
             stream.transfers.size());
  report_written(pools_path);
  report_written(transfers_path);

  RunManifest manifest;
  manifest.command = "synth";
  manifest.add_parameter("tokens", std::to_string(params.n_tokens));
  manifest.add_parameter("transfers", std::to_string(params.n_transfers));
  manifest.add_parameter("seed", std::to_string(params.seed));
  manifest.add_parameter("hub_fraction", format_double(params.hub_fraction));
  manifest.add_parameter("attachment_exponent", format_double(params.attachment_exponent));
  manifest.add_parameter("zipf_exponent", format_double(params.zipf_exponent));
  manifest.add_parameter("platform", params.platform.name());
  manifest.add_parameter("range", args.range);
  manifest.add_output(pools_path);
  manifest.add_output(transfers_path);
  write_manifest(manifest, args.out_prefix + ".manifest.json");
  return kExitOk;
}

// ---------------------------------------------------------------------- build

struct BuildArgs {
  std::string pools;
  std::string transfers;
  std::string platform;
  std::string range;
  std::size_t slices = 100;
  bool weighted = false;
  std::string out;
};

int run_build(const BuildArgs& args) {
  const Platform platform = Platform::named(args.platform);
  const BlockRange range = parse_range(args.range);

  RegistryParseResult pools = load_pool_registry(args.pools);
  if (!pools.errors.empty()) {
    fmt::print(stderr, "warning: {} malformed pool lines (first at line {}: {})\n",
               pools.errors.size(), pools.errors.front().line, pools.errors.front().message);
  }
  TransferParseResult transfers = load_transfers(args.transfers, range);
  if (!transfers.errors.empty()) {
    fmt::print(stderr, "warning: {} malformed transfer lines (first at line {}: {})\n",
               transfers.errors.size(), transfers.errors.front().line,
               transfers.errors.front().message);
  }
  ResolveResult resolved = resolve_edge_events(transfers.records, pools.registry);
  if (resolved.unknown_pools > 0) {
    fmt::print(stderr, "warning: {} transfers referenced unknown pools\n",
               resolved.unknown_pools);
  }

  const TimeSegmentation seg = segment_blocks(range, args.slices);
  GraphBundle bundle = GraphBundle::from_events(resolved.events, seg, platform, args.weighted);
  write_graph_bundle(args.out, bundle);
  fmt::print("pools={} transfers={} (out_of_range={}) events={} tokens={}\n",
             pools.registry.size(), transfers.records.size(), transfers.out_of_range,
             resolved.events.size(), bundle.tokens().size());
  report_written(args.out);

  RunManifest manifest;
  manifest.command = "build";
  manifest.add_parameter("platform", platform.name());
  manifest.add_parameter("range", args.range);
  manifest.add_parameter("slices", std::to_string(args.slices));
  manifest.add_parameter("weighted", args.weighted ? "true" : "false");
  manifest.add_input(args.pools);
  manifest.add_input(args.transfers);
  manifest.add_output(args.out);
  write_manifest(manifest, args.out + ".manifest.json");
  return kExitOk;
}

// -------------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string graph;
  std::string slice = "0";
  std::string out_dir;
  std::size_t approx_diameter = 0;  // 0 = exact
  std::uint64_t approx_seed = 0;
};

int run_analyze(const AnalyzeArgs& args) {
  const GraphBundle bundle = read_graph_bundle(args.graph);
  const SliceSelection sel = parse_slice_flag(args.slice);
  const std::vector<SliceIndex> slices = selected_slices(sel, bundle);
  fs::create_directories(args.out_dir);
  const fs::path dir = args.out_dir;

  std::vector<AnalysisReport> reports;
  const fs::path hist_path = dir / "degree_histogram.csv";
  std::vector<std::tuple<SliceIndex, DegreeHistogram>> histograms;

  for (SliceIndex slice : slices) {
    const TokenGraph g = bundle.graph(slice);
    AnalysisReport report;
    report.platform = bundle.platform();
    report.slice = slice;
    report.metrics.emplace_back("nodes", static_cast<double>(g.node_count()));
    report.metrics.emplace_back("edges", static_cast<double>(g.edge_count()));
    report.metrics.emplace_back("total_weight", static_cast<double>(g.total_weight()));
    if (g.node_count() >= 1) {
      report.metrics.emplace_back("average_degree", average_degree(g));
    }
    if (g.node_count() >= 2) {
      report.metrics.emplace_back("density", density(g));
    }
    if (g.node_count() >= 1) {
      const ComponentDecomposition comps = connected_components(g);
      report.metrics.emplace_back("components", static_cast<double>(comps.count()));
      report.metrics.emplace_back("giant_size", static_cast<double>(comps.giant().size()));
      if (comps.giant().size() >= 2) {
        const TokenGraph giant = induced_subgraph(g, comps.giant());
        std::size_t diam = 0;
        if (args.approx_diameter > 0) {
          diam = diameter_lower_bound(giant, args.approx_diameter, args.approx_seed);
          report.metrics.emplace_back("diameter_lower_bound", static_cast<double>(diam));
        } else {
          diam = diameter(giant);
          report.metrics.emplace_back("diameter", static_cast<double>(diam));
        }
        const double ln_n = std::log(static_cast<double>(g.node_count()));
        report.metrics.emplace_back("ln_nodes", ln_n);
        report.metrics.emplace_back("diameter_over_ln_nodes",
                                    static_cast<double>(diam) / ln_n);
      }
      histograms.emplace_back(slice, degree_distribution(g));
    }
    reports.push_back(std::move(report));
  }

  const fs::path metrics_path = dir / "metrics.csv";
  write_metrics_csv(metrics_path, reports);
  report_written(metrics_path);

  // One histogram file covering every analyzed slice.
  {
    std::ofstream out(hist_path, std::ios::binary);
    if (!out) {
      throw IoError(fmt::format("cannot write {}", hist_path.string()));
    }
    out << "platform,slice,degree,count\n";
    for (const auto& [slice, hist] : histograms) {
      for (const auto& [degree, count] : hist.counts) {
        out << csv_quote(bundle.platform().name()) << ',' << slice.value() << ',' << degree
            << ',' << count << '\n';
      }
    }
    out.flush();
    if (!out) {
      throw IoError(fmt::format("write failed for {}", hist_path.string()));
    }
  }
  report_written(hist_path);

  RunManifest manifest;
  manifest.command = "analyze";
  manifest.add_parameter("slice", args.slice);
  if (args.approx_diameter > 0) {
    manifest.add_parameter("approx_diameter", std::to_string(args.approx_diameter));
    manifest.add_parameter("approx_seed", std::to_string(args.approx_seed));
  }
  manifest.add_input(args.graph);
  manifest.add_output(metrics_path.string());
  manifest.add_output(hist_path.string());

  if (sel.all) {
    const std::vector<TokenGraph> series = bundle.series();
    const fs::path ratio_path = dir / "ratio_series.csv";
    try {
      const RatioSeries ratios = ratio_series(series);
      write_ratio_series_csv(ratio_path, bundle.platform(), ratios);
      report_written(ratio_path);
      manifest.add_output(ratio_path.string());
      fmt::print("ratio mean={} variance={} over {} nonempty slices\n",
                 format_double(ratios.mean), format_double(ratios.variance),
                 ratios.values.size());
    } catch (const UndefinedMetricError&) {
      fmt::print(stderr, "warning: every slice is empty, no ratio series written\n");
    }
  }

  write_manifest(manifest, dir / "manifest.json");
  return kExitOk;
}

// ----------------------------------------------------------------- centrality

struct CentralityArgs {
  std::string graph;
  std::string slice = "0";
  std::size_t top = 10;
  std::string token;
  std::string out_dir;
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  bool per_component = false;
};

int run_centrality(const CentralityArgs& args) {
  const GraphBundle bundle = read_graph_bundle(args.graph);
  const SliceSelection sel = parse_slice_flag(args.slice);
  const std::vector<SliceIndex> slices = selected_slices(sel, bundle);
  fs::create_directories(args.out_dir);
  const fs::path dir = args.out_dir;

  bool all_converged = true;
  const fs::path rankings_path = dir / "rankings.csv";
  {
    std::ofstream out(rankings_path, std::ios::binary);
    if (!out) {
      throw IoError(fmt::format("cannot write {}", rankings_path.string()));
    }
    out << "platform,slice,rank,token,symbol,score\n";
    for (SliceIndex slice : slices) {
      const TokenGraph g = bundle.graph(slice);
      if (g.node_count() == 0) {
        continue;
      }
      const CentralityVector cv = args.per_component
                                      ? eigenvector_centrality_per_component(g, args.tol,
                                                                             args.max_iter)
                                      : eigenvector_centrality(g, args.tol, args.max_iter);
      all_converged = all_converged && cv.converged;
      const auto ranking = top_k(cv, args.top == 0 ? cv.tokens.size() : args.top);
      for (std::size_t i = 0; i < ranking.size(); ++i) {
        out << csv_quote(bundle.platform().name()) << ',' << slice.value() << ',' << (i + 1)
            << ',' << ranking[i].token.address() << ',' << csv_quote(ranking[i].token.symbol())
            << ',' << format_double(ranking[i].score) << '\n';
      }
    }
    out.flush();
    if (!out) {
      throw IoError(fmt::format("write failed for {}", rankings_path.string()));
    }
  }
  report_written(rankings_path);

  RunManifest manifest;
  manifest.command = "centrality";
  manifest.add_parameter("slice", args.slice);
  manifest.add_parameter("top", std::to_string(args.top));
  manifest.add_parameter("tol", format_double(args.tol));
  manifest.add_parameter("max_iter", std::to_string(args.max_iter));
  manifest.add_parameter("per_component", args.per_component ? "true" : "false");
  manifest.add_input(args.graph);
  manifest.add_output(rankings_path.string());

  if (!args.token.empty()) {
    const TokenId token = TokenId::from_address(args.token);
    const std::vector<TokenGraph> series = bundle.series();
    const std::vector<CentralityVector> per_slice =
        slice_centralities(series, args.tol, args.max_iter);
    for (const auto& cv : per_slice) {
      all_converged = all_converged && cv.converged;
    }
    const CentralityTimeSeries ts = centrality_time_series(per_slice, token);
    const fs::path series_path = dir / "centrality_series.csv";
    write_centrality_series_csv(series_path, bundle.platform(), ts);
    report_written(series_path);
    manifest.add_parameter("token", token.address());
    manifest.add_output(series_path.string());
  }

  write_manifest(manifest, dir / "manifest.json");
  return all_converged ? kExitOk : kExitNoConvergence;
}

// ------------------------------------------------------------------ anomalies

struct AnomaliesArgs {
  std::string graph;
  double threshold = 5.0;
  std::size_t min_slices = 5;
  std::size_t exclude_top = 5;
  std::string out;
  double tol = 1e-10;
  std::size_t max_iter = 1000;
};

int run_anomalies(const AnomaliesArgs& args) {
  const GraphBundle bundle = read_graph_bundle(args.graph);
  const std::vector<TokenGraph> series = bundle.series();
  const AnomalyReport report = detect_anomalies(series, args.threshold, args.min_slices,
                                                args.exclude_top, args.tol, args.max_iter);
  write_anomalies_csv(args.out, bundle.platform(), report);
  fmt::print("{} anomalies flagged across {} slices\n", report.flags.size(), series.size());
  report_written(args.out);

  RunManifest manifest;
  manifest.command = "anomalies";
  manifest.add_parameter("threshold", format_double(args.threshold));
  manifest.add_parameter("min_slices", std::to_string(args.min_slices));
  manifest.add_parameter("exclude_top", std::to_string(args.exclude_top));
  manifest.add_parameter("tol", format_double(args.tol));
  manifest.add_parameter("max_iter", std::to_string(args.max_iter));
  manifest.add_input(args.graph);
  manifest.add_output(args.out);
  write_manifest(manifest, args.out + ".manifest.json");

  if (report.nonconverged_runs > 0) {
    fmt::print(stderr, "warning: {} centrality runs did not converge\n",
               report.nonconverged_runs);
    return kExitNoConvergence;
  }
  return kExitOk;
}

// ------------------------------------------------------------------- powerlaw

struct PowerlawArgs {
  std::string graph;
  std::string slice = "0";
  std::string out;
  bool log_binning = false;
  std::size_t truncate_above = 0;
};

int run_powerlaw(const PowerlawArgs& args) {
  const GraphBundle bundle = read_graph_bundle(args.graph);
  const SliceSelection sel = parse_slice_flag(args.slice);
  const std::vector<SliceIndex> slices = selected_slices(sel, bundle);

  LogLogOptions options;
  options.log_binning = args.log_binning;
  options.truncate_above = args.truncate_above;

  std::vector<PowerLawRow> rows;
  for (SliceIndex slice : slices) {
    const TokenGraph g = bundle.graph(slice);
    if (g.node_count() == 0) {
      continue;
    }
    const LogLogPoints points = loglog_points(degree_distribution(g), options);
    PowerLawRow row;
    row.platform = bundle.platform();
    row.slice = slice;
    row.fit = ols_fit(points);
    rows.push_back(row);
    fmt::print("slice {}: slope={} r2={} p={}\n", slice.value(), format_double(row.fit.slope),
               format_double(row.fit.r_squared), format_double(row.fit.p_value));
  }
  write_powerlaw_csv(args.out, rows);
  report_written(args.out);

  RunManifest manifest;
  manifest.command = "powerlaw";
  manifest.add_parameter("slice", args.slice);
  manifest.add_parameter("log_binning", args.log_binning ? "true" : "false");
  manifest.add_parameter("truncate_above", std::to_string(args.truncate_above));
  manifest.add_input(args.graph);
  manifest.add_output(args.out);
  write_manifest(manifest, args.out + ".manifest.json");
  return kExitOk;
}

// ---------------------------------------------------------------- communities

struct CommunitiesArgs {
  std::string graph;
  std::string slice = "0";
  std::uint64_t seed = 0;
  double resolution = 1.0;
  std::string out;
};

int run_communities(const CommunitiesArgs& args) {
  const GraphBundle bundle = read_graph_bundle(args.graph);
  const SliceSelection sel = parse_slice_flag(args.slice);
  if (sel.all) {
    throw InvalidArgumentError("communities runs on a single slice; pass --slice <i> or 0");
  }
  const TokenGraph g = bundle.graph(sel.one);
  if (g.node_count() == 0) {
    throw UndefinedMetricError("selected slice has no nodes");
  }
  const CommunityAssignment assignment = louvain(g, args.resolution, args.seed);
  fmt::print("{} communities, modularity {}\n", assignment.community_count,
             format_double(assignment.modularity));

  {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
      throw IoError(fmt::format("cannot write {}", args.out));
    }
    out << "platform,slice,token,symbol,community\n";
    for (std::size_t i = 0; i < assignment.tokens.size(); ++i) {
      out << csv_quote(bundle.platform().name()) << ',' << sel.one.value() << ','
          << assignment.tokens[i].address() << ',' << csv_quote(assignment.tokens[i].symbol())
          << ',' << assignment.labels[i] << '\n';
    }
    out.flush();
    if (!out) {
      throw IoError(fmt::format("write failed for {}", args.out));
    }
  }
  report_written(args.out);

  RunManifest manifest;
  manifest.command = "communities";
  manifest.add_parameter("slice", args.slice);
  manifest.add_parameter("seed", std::to_string(args.seed));
  manifest.add_parameter("resolution", format_double(args.resolution));
  manifest.add_parameter("communities", std::to_string(assignment.community_count));
  manifest.add_parameter("modularity", format_double(assignment.modularity));
  manifest.add_input(args.graph);
  manifest.add_output(args.out);
  write_manifest(manifest, args.out + ".manifest.json");
  return kExitOk;
}

// --------------------------------------------------------------------- export

struct ExportArgs {
  std::string graph;
  std::string slice = "0";
  std::size_t min_degree = 0;
  bool with_centrality = false;
  bool with_communities = false;
  std::string format = "graphml";
  std::string out;
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  std::uint64_t seed = 0;
  double resolution = 1.0;
};

int run_export(const ExportArgs& args) {
  const GraphBundle bundle = read_graph_bundle(args.graph);
  const SliceSelection sel = parse_slice_flag(args.slice);
  if (sel.all) {
    throw InvalidArgumentError("export writes a single slice; pass --slice <i> or 0");
  }
  TokenGraph g = bundle.graph(sel.one);
  if (args.min_degree > 0) {
    g = filter_min_degree(g, args.min_degree);
  }

  bool converged = true;
  std::optional<CentralityVector> centrality;
  if (args.with_centrality) {
    if (g.node_count() == 0) {
      throw UndefinedMetricError("cannot compute centrality on an empty export");
    }
    centrality = eigenvector_centrality(g, args.tol, args.max_iter);
    converged = centrality->converged;
  }
  std::optional<CommunityAssignment> communities;
  if (args.with_communities) {
    if (g.node_count() == 0) {
      throw InvalidArgumentError("cannot detect communities on an empty export");
    }
    communities = louvain(g, args.resolution, args.seed);
  }

  const std::string doc = to_graphml(g, centrality ? &*centrality : nullptr,
                                     communities ? &*communities : nullptr);
  {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
      throw IoError(fmt::format("cannot write {}", args.out));
    }
    out << doc;
    out.flush();
    if (!out) {
      throw IoError(fmt::format("write failed for {}", args.out));
    }
  }
  fmt::print("exported {} nodes, {} edges\n", g.node_count(), g.edge_count());
  report_written(args.out);

  RunManifest manifest;
  manifest.command = "export";
  manifest.add_parameter("slice", args.slice);
  manifest.add_parameter("min_degree", std::to_string(args.min_degree));
  manifest.add_parameter("with_centrality", args.with_centrality ? "true" : "false");
  manifest.add_parameter("with_communities", args.with_communities ? "true" : "false");
  manifest.add_parameter("format", args.format);
  manifest.add_input(args.graph);
  manifest.add_output(args.out);
  write_manifest(manifest, args.out + ".manifest.json");

  return converged ? kExitOk : kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Token-graph construction and analysis for DEX transfer data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  FetchPoolsArgs fetch_args;
  auto* fetch = app.add_subcommand("fetch-pools", "Fetch a pool registry over JSON-RPC");
  fetch->add_option("--rpc", fetch_args.rpc, "JSON-RPC endpoint URL")->required();
  fetch->add_option("--factory", fetch_args.factory, "Factory contract address")->required();
  fetch->add_option("--platform", fetch_args.platform, "Platform tag")->required();
  fetch->add_option("--out", fetch_args.out, "Output registry file")->required();
  fetch->add_option("--parallelism", fetch_args.rpc_options.parallelism,
                    "Concurrent batch requests")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  fetch->add_option("--batch-size", fetch_args.rpc_options.batch_size, "Calls per batch")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  fetch->add_option("--retries", fetch_args.rpc_options.max_retries,
                    "Retries after a transient failure");
  fetch->add_option("--timeout-ms", fetch_args.timeout_ms, "Request timeout in milliseconds");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic transfer stream");
  synth->add_option("--tokens", synth_args.params.n_tokens, "Number of tokens")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  synth->add_option("--transfers", synth_args.params.n_transfers, "Number of transfers")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_args.params.seed, "Generator seed");
  synth->add_option("--hub-fraction", synth_args.params.hub_fraction,
                    "Probability a new token pairs with the hub")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--attachment-exponent", synth_args.params.attachment_exponent,
                    "Preferential attachment exponent")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--zipf-exponent", synth_args.params.zipf_exponent,
                    "Pool popularity exponent")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--platform", synth_args.platform, "Platform tag");
  synth->add_option("--range", synth_args.range, "Block range start:end")
      ->check(CLI::Validator(
          [](std::string& s) {
            return s.find(':') != std::string::npos ? "" : "expected start:end";
          },
          "RANGE"));
  synth->add_option("--out-prefix", synth_args.out_prefix, "Output path prefix")->required();

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "Build a sliced token graph bundle from fixtures");
  build->add_option("--pools", build_args.pools, "Pool registry fixture")->required();
  build->add_option("--transfers", build_args.transfers, "Transfer fixture")->required();
  build->add_option("--platform", build_args.platform, "Platform to select")->required();
  build->add_option("--range", build_args.range, "Block range start:end")->required();
  build->add_option("--slices", build_args.slices, "Number of time segments")
      ->check(CLI::PositiveNumber);
  build->add_flag("--weighted", build_args.weighted, "Weight edges by transfer count");
  build->add_option("--out", build_args.out, "Output bundle file")->required();

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Structural metrics for bundle slices");
  analyze->add_option("--graph", analyze_args.graph, "Graph bundle file")->required();
  analyze->add_option("--slice", analyze_args.slice, "Slice: integer (0 = whole) or \"all\"");
  analyze->add_option("--out-dir", analyze_args.out_dir, "Output directory")->required();
  analyze->add_option("--approx-diameter", analyze_args.approx_diameter,
                      "Approximate the diameter with this many BFS seeds (0 = exact)");
  analyze->add_option("--approx-seed", analyze_args.approx_seed,
                      "Seed for approximate diameter sampling");

  CentralityArgs centrality_args;
  auto* centrality = app.add_subcommand("centrality", "Eigenvector centrality rankings");
  centrality->add_option("--graph", centrality_args.graph, "Graph bundle file")->required();
  centrality->add_option("--slice", centrality_args.slice,
                         "Slice: integer (0 = whole) or \"all\"");
  centrality->add_option("--top", centrality_args.top, "Ranking size (0 = all tokens)");
  centrality->add_option("--token", centrality_args.token,
                         "Token address for a per-slice time series");
  centrality->add_option("--out-dir", centrality_args.out_dir, "Output directory")->required();
  centrality->add_option("--tol", centrality_args.tol, "Convergence tolerance");
  centrality->add_option("--max-iter", centrality_args.max_iter, "Iteration cap");
  centrality->add_flag("--per-component", centrality_args.per_component,
                       "Normalize each connected component separately");

  AnomaliesArgs anomalies_args;
  auto* anomalies = app.add_subcommand("anomalies", "Centrality spike detection");
  anomalies->add_option("--graph", anomalies_args.graph, "Graph bundle file")->required();
  anomalies->add_option("--threshold", anomalies_args.threshold,
                        "Normalized-centrality threshold (> 1)");
  anomalies->add_option("--min-slices", anomalies_args.min_slices,
                        "Minimum slices a token must appear in");
  anomalies->add_option("--exclude-top", anomalies_args.exclude_top,
                        "Exclude the whole-range top K tokens");
  anomalies->add_option("--out", anomalies_args.out, "Output CSV file")->required();
  anomalies->add_option("--tol", anomalies_args.tol, "Convergence tolerance");
  anomalies->add_option("--max-iter", anomalies_args.max_iter, "Iteration cap");

  PowerlawArgs powerlaw_args;
  auto* powerlaw = app.add_subcommand("powerlaw", "Log-log degree distribution fit");
  powerlaw->add_option("--graph", powerlaw_args.graph, "Graph bundle file")->required();
  powerlaw->add_option("--slice", powerlaw_args.slice, "Slice: integer (0 = whole) or \"all\"");
  powerlaw->add_option("--out", powerlaw_args.out, "Output CSV file")->required();
  powerlaw->add_flag("--log-binning", powerlaw_args.log_binning,
                     "Bin degrees geometrically before fitting");
  powerlaw->add_option("--truncate-above", powerlaw_args.truncate_above,
                       "Drop degrees above this value (0 = keep all)");

  CommunitiesArgs communities_args;
  auto* communities = app.add_subcommand("communities", "Louvain community detection");
  communities->add_option("--graph", communities_args.graph, "Graph bundle file")->required();
  communities->add_option("--slice", communities_args.slice, "Slice: integer (0 = whole)");
  communities->add_option("--seed", communities_args.seed, "Shuffle seed");
  communities->add_option("--resolution", communities_args.resolution, "Resolution parameter")
      ->check(CLI::PositiveNumber);
  communities->add_option("--out", communities_args.out, "Output CSV file")->required();

  ExportArgs export_args;
  auto* exporter = app.add_subcommand("export", "Export one slice as GraphML");
  exporter->add_option("--graph", export_args.graph, "Graph bundle file")->required();
  exporter->add_option("--slice", export_args.slice, "Slice: integer (0 = whole)");
  exporter->add_option("--min-degree", export_args.min_degree,
                       "Drop nodes below this degree before export");
  exporter->add_flag("--with-centrality", export_args.with_centrality,
                     "Attach eigenvector centrality node attributes");
  exporter->add_flag("--with-communities", export_args.with_communities,
                     "Attach Louvain community node attributes");
  exporter->add_option("--format", export_args.format, "Output format")
      ->check(CLI::IsMember({"graphml"}));
  exporter->add_option("--out", export_args.out, "Output file")->required();
  exporter->add_option("--tol", export_args.tol, "Centrality convergence tolerance");
  exporter->add_option("--max-iter", export_args.max_iter, "Centrality iteration cap");
  exporter->add_option("--seed", export_args.seed, "Louvain shuffle seed");
  exporter->add_option("--resolution", export_args.resolution, "Louvain resolution")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fetch->parsed()) {
      return run_fetch_pools(fetch_args);
    }
    if (synth->parsed()) {
      return run_synth(synth_args);
    }
    if (build->parsed()) {
      return run_build(build_args);
    }
    if (analyze->parsed()) {
      return run_analyze(analyze_args);
    }
    if (centrality->parsed()) {
      return run_centrality(centrality_args);
    }
    if (anomalies->parsed()) {
      return run_anomalies(anomalies_args);
    }
    if (powerlaw->parsed()) {
      return run_powerlaw(powerlaw_args);
    }
    if (communities->parsed()) {
      return run_communities(communities_args);
    }
    if (exporter->parsed()) {
      return run_export(export_args);
    }
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dexnet/analytics.hpp"
#include "dexnet/centrality.hpp"
#include "dexnet/statfit.hpp"

namespace dexnet {

/// Named scalar metrics for one (platform, slice) graph, written as long-form
/// rows of metrics.csv.
struct AnalysisReport {
  Platform platform;
  SliceIndex slice;
  std::vector<std::pair<std::string, double>> metrics;
};

/// Shortest decimal representation that round-trips to the same double.
/// Shared by every report writer so numeric output is byte-deterministic.
std::string format_double(double value);

/// RFC 4180 field quoting: wraps in double quotes only when the field
/// contains a comma, quote, or line break, doubling any embedded quotes.
std::string csv_quote(std::string_view field);

/// CSV writers. One file per call, UTF-8, header row first, fields quoted
/// per RFC 4180 only when needed. Column orders are listed in the README.
/// All throw IoError with the path when the destination cannot be written.

void write_metrics_csv(const std::filesystem::path& path,
                       std::span<const AnalysisReport> reports);

void write_rankings_csv(const std::filesystem::path& path, const Platform& platform,
                        SliceIndex slice, std::span<const RankedToken> ranking);

void write_ratio_series_csv(const std::filesystem::path& path, const Platform& platform,
                            const RatioSeries& series);

void write_centrality_series_csv(const std::filesystem::path& path, const Platform& platform,
                                 const CentralityTimeSeries& series);

void write_anomalies_csv(const std::filesystem::path& path, const Platform& platform,
                         const AnomalyReport& report);

struct PowerLawRow {
  Platform platform;
  SliceIndex slice;
  PowerLawFit fit;
};

void write_powerlaw_csv(const std::filesystem::path& path, std::span<const PowerLawRow> rows);

void write_degree_histogram_csv(const std::filesystem::path& path, const Platform& platform,
                                SliceIndex slice, const DegreeHistogram& hist);

}  // namespace dexnet

#include "dexnet/csv.hpp"

#include <fmt/core.h>

#include <charconv>
#include <fstream>

#include "dexnet/error.hpp"

namespace dexnet {

std::string csv_quote(std::string_view field) {
  const bool needs_quoting = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quoting) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += "\"\"";
    } else {
      out.push_back(c);
    }
  }
  out += "\"";
  return out;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(fmt::format("cannot write {}", path.string()));
  }
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw IoError(fmt::format("write failed for {}", path.string()));
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_metrics_csv(const std::filesystem::path& path,
                       std::span<const AnalysisReport> reports) {
  auto out = open_for_write(path);
  out << "platform,slice,metric,value\n";
  for (const auto& report : reports) {
    for (const auto& [name, value] : report.metrics) {
      out << csv_quote(report.platform.name()) << ',' << report.slice.value() << ','
          << csv_quote(name) << ',' << format_double(value) << '\n';
    }
  }
  finish(out, path);
}

void write_rankings_csv(const std::filesystem::path& path, const Platform& platform,
                        SliceIndex slice, std::span<const RankedToken> ranking) {
  auto out = open_for_write(path);
  out << "platform,slice,rank,token,symbol,score\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out << csv_quote(platform.name()) << ',' << slice.value() << ',' << (i + 1) << ','
        << ranking[i].token.address() << ',' << csv_quote(ranking[i].token.symbol()) << ','
        << format_double(ranking[i].score) << '\n';
  }
  finish(out, path);
}

void write_ratio_series_csv(const std::filesystem::path& path, const Platform& platform,
                            const RatioSeries& series) {
  auto out = open_for_write(path);
  out << "platform,slice,nodes,edges,ratio\n";
  for (const auto& entry : series.values) {
    out << csv_quote(platform.name()) << ',' << entry.slice << ',' << entry.nodes << ','
        << entry.edges << ',' << format_double(entry.ratio) << '\n';
  }
  finish(out, path);
}

void write_centrality_series_csv(const std::filesystem::path& path, const Platform& platform,
                                 const CentralityTimeSeries& series) {
  auto out = open_for_write(path);
  out << "platform,token,symbol,slice,raw,normalized\n";
  for (const auto& point : series.points) {
    out << csv_quote(platform.name()) << ',' << series.token.address() << ','
        << csv_quote(series.token.symbol()) << ',' << point.slice << ','
        << format_double(point.raw) << ',' << format_double(point.normalized) << '\n';
  }
  finish(out, path);
}

void write_anomalies_csv(const std::filesystem::path& path, const Platform& platform,
                         const AnomalyReport& report) {
  auto out = open_for_write(path);
  out << "platform,token,symbol,slice,raw,normalized,threshold,global_rank\n";
  for (const auto& flag : report.flags) {
    out << csv_quote(platform.name()) << ',' << flag.token.address() << ','
        << csv_quote(flag.token.symbol()) << ',' << flag.slice << ','
        << format_double(flag.raw) << ',' << format_double(flag.normalized) << ','
        << format_double(flag.threshold) << ',' << flag.global_rank << '\n';
  }
  finish(out, path);
}

void write_powerlaw_csv(const std::filesystem::path& path, std::span<const PowerLawRow> rows) {
  auto out = open_for_write(path);
  out << "platform,slice,n_points,slope,intercept,r_squared,t_statistic,degrees_of_freedom,"
         "p_value\n";
  for (const auto& row : rows) {
    out << csv_quote(row.platform.name()) << ',' << row.slice.value() << ',' << row.fit.n_points
        << ',' << format_double(row.fit.slope) << ',' << format_double(row.fit.intercept) << ','
        << format_double(row.fit.r_squared) << ',' << format_double(row.fit.t_statistic) << ','
        << row.fit.degrees_of_freedom << ',' << format_double(row.fit.p_value) << '\n';
  }
  finish(out, path);
}

void write_degree_histogram_csv(const std::filesystem::path& path, const Platform& platform,
                                SliceIndex slice, const DegreeHistogram& hist) {
  auto out = open_for_write(path);
  out << "platform,slice,degree,count\n";
  for (const auto& [degree, count] : hist.counts) {
    out << csv_quote(platform.name()) << ',' << slice.value() << ',' << degree << ',' << count
        << '\n';
  }
  finish(out, path);
}

}  // namespace dexnet

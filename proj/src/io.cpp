#include "dexnet/io.hpp"

#include <fmt/core.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dexnet/error.hpp"
#include "dexnet/keccak.hpp"

namespace dexnet {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr int kBundleFormatVersion = 1;

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

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot read {}", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError(fmt::format("read failed for {}", path.string()));
  }
  return std::move(buffer).str();
}

[[noreturn]] void bundle_error(const std::filesystem::path& path, std::size_t line,
                               std::string_view message) {
  throw ParseError(fmt::format("{}:{}: {}", path.string(), line, message));
}

}  // namespace

void write_pool_registry(const std::filesystem::path& path, const PoolRegistry& registry) {
  auto out = open_for_write(path);
  for (const auto& [address, pool] : registry.pools()) {
    ordered_json line = {{"pool", address},
                         {"token0", pool.token0.address()},
                         {"token1", pool.token1.address()},
                         {"platform", pool.platform.name()}};
    if (!pool.token0.symbol().empty()) {
      line["symbol0"] = pool.token0.symbol();
    }
    if (!pool.token1.symbol().empty()) {
      line["symbol1"] = pool.token1.symbol();
    }
    out << line.dump() << '\n';
  }
  finish(out, path);
}

void write_transfers(const std::filesystem::path& path,
                     std::span<const TransferRecord> records) {
  auto out = open_for_write(path);
  for (const auto& rec : records) {
    ordered_json line = {{"block", rec.block},
                         {"pool", rec.pool},
                         {"platform", rec.platform.name()}};
    out << line.dump() << '\n';
  }
  finish(out, path);
}

void write_graph_bundle(const std::filesystem::path& path, const GraphBundle& bundle) {
  auto out = open_for_write(path);
  const auto& seg = bundle.segmentation();
  ordered_json header = {{"dexnet_graph", kBundleFormatVersion},
                         {"platform", bundle.platform().name()},
                         {"range", {{"start", seg.range().start}, {"end", seg.range().end}}},
                         {"segments", seg.segment_count()},
                         {"weighted", bundle.weighted()}};
  out << header.dump() << '\n';
  for (const auto& token : bundle.tokens()) {
    ordered_json line = {{"token", token.address()}};
    if (!token.symbol().empty()) {
      line["symbol"] = token.symbol();
    }
    out << line.dump() << '\n';
  }
  for (std::size_t slice = 1; slice <= bundle.slice_count(); ++slice) {
    for (const auto& edge : bundle.slice_edges(slice)) {
      ordered_json line = {
          {"slice", slice}, {"a", edge.a}, {"b", edge.b}, {"w", edge.weight}};
      out << line.dump() << '\n';
    }
  }
  finish(out, path);
}

GraphBundle read_graph_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot read {}", path.string()));
  }

  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    bundle_error(path, 1, "empty file, expected a bundle header");
  }
  ++line_no;
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) {
    bundle_error(path, line_no, "header is not a JSON object");
  }
  if (!header.contains("dexnet_graph") || !header["dexnet_graph"].is_number_integer() ||
      header["dexnet_graph"].get<int>() != kBundleFormatVersion) {
    bundle_error(path, line_no, "missing or unsupported dexnet_graph format version");
  }
  Platform platform;
  BlockRange range;
  std::size_t segments = 0;
  bool weighted = false;
  try {
    platform = Platform::named(header.at("platform").get<std::string>());
    range = BlockRange(header.at("range").at("start").get<BlockHeight>(),
                       header.at("range").at("end").get<BlockHeight>());
    segments = header.at("segments").get<std::size_t>();
    weighted = header.at("weighted").get<bool>();
  } catch (const json::exception& e) {
    bundle_error(path, line_no, fmt::format("bad header: {}", e.what()));
  } catch (const InvalidArgumentError& e) {
    bundle_error(path, line_no, fmt::format("bad header: {}", e.what()));
  }
  TimeSegmentation seg = [&] {
    try {
      return segment_blocks(range, segments);
    } catch (const InvalidSegmentationError& e) {
      bundle_error(path, line_no, fmt::format("bad header: {}", e.what()));
    }
  }();

  std::vector<TokenId> tokens;
  std::vector<std::vector<GraphBundle::SliceEdge>> slice_edges(segments);
  bool in_edges = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      bundle_error(path, line_no, "line is not a JSON object");
    }
    if (rec.contains("token")) {
      if (in_edges) {
        bundle_error(path, line_no, "token line after edge lines");
      }
      try {
        tokens.push_back(TokenId::from_address(rec.at("token").get<std::string>(),
                                               rec.value("symbol", "")));
      } catch (const json::exception& e) {
        bundle_error(path, line_no, e.what());
      } catch (const InvalidArgumentError& e) {
        bundle_error(path, line_no, e.what());
      }
      if (tokens.size() > 1 && !(tokens[tokens.size() - 2] < tokens.back())) {
        bundle_error(path, line_no, "tokens out of order");
      }
      continue;
    }
    if (rec.contains("slice")) {
      in_edges = true;
      GraphBundle::SliceEdge edge;
      std::size_t slice = 0;
      try {
        slice = rec.at("slice").get<std::size_t>();
        edge.a = rec.at("a").get<NodeIndex>();
        edge.b = rec.at("b").get<NodeIndex>();
        edge.weight = rec.at("w").get<EdgeWeight>();
      } catch (const json::exception& e) {
        bundle_error(path, line_no, e.what());
      }
      if (slice < 1 || slice > segments) {
        bundle_error(path, line_no, fmt::format("slice {} out of range 1..{}", slice, segments));
      }
      if (edge.a >= tokens.size() || edge.b >= tokens.size() || edge.a >= edge.b) {
        bundle_error(path, line_no, "edge endpoints invalid");
      }
      if (edge.weight == 0) {
        bundle_error(path, line_no, "edge weight must be positive");
      }
      slice_edges[slice - 1].push_back(edge);
      continue;
    }
    bundle_error(path, line_no, "line is neither a token nor an edge record");
  }
  if (in.bad()) {
    throw IoError(fmt::format("read failed for {}", path.string()));
  }

  try {
    return GraphBundle(platform, seg, weighted, std::move(tokens), std::move(slice_edges));
  } catch (const InvalidArgumentError& e) {
    throw ParseError(fmt::format("{}: inconsistent bundle: {}", path.string(), e.what()));
  }
}

void RunManifest::add_parameter(std::string name, std::string value) {
  parameters.emplace_back(std::move(name), std::move(value));
}

void RunManifest::add_input(const std::filesystem::path& path) {
  input_digests.emplace_back(path.string(), keccak256_hex(read_file(path)));
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs.push_back(path.string());
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  ordered_json doc;
  doc["tool"] = "dexnet";
  doc["version"] = kVersion;
  doc["command"] = manifest.command;
  ordered_json params = ordered_json::object();
  for (const auto& [name, value] : manifest.parameters) {
    params[name] = value;
  }
  doc["parameters"] = params;
  ordered_json digests = ordered_json::object();
  for (const auto& [file, digest] : manifest.input_digests) {
    digests[file] = digest;
  }
  doc["input_digests"] = digests;
  doc["outputs"] = manifest.outputs;

  auto out = open_for_write(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

}  // namespace dexnet

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dexnet/graph.hpp"
#include "dexnet/ingest.hpp"

namespace dexnet {

/// Writes a registry as the line-delimited JSON fixture format read by
/// parse_pool_registry, one pool per line in address order. Symbol fields
/// appear only when non-empty.
void write_pool_registry(const std::filesystem::path& path, const PoolRegistry& registry);

/// Writes transfers as the fixture format read by parse_transfers, one
/// record per line in input order.
void write_transfers(const std::filesystem::path& path, std::span<const TransferRecord> records);

/// Writes a bundle as line-delimited JSON: a header line with platform,
/// range, segment count and weighted flag, then one line per token, then one
/// line per (slice, edge) with weights. Deterministic for identical bundles.
void write_graph_bundle(const std::filesystem::path& path, const GraphBundle& bundle);

/// Reads the format written by write_graph_bundle. Structural problems
/// (bad header, indexes out of range, malformed lines) raise ParseError with
/// the line number.
GraphBundle read_graph_bundle(const std::filesystem::path& path);

/// Reproducibility sidecar written next to every CLI output: tool version,
/// the exact command, parameters, and content digests of the inputs. No
/// timestamps, so reruns on identical inputs produce identical manifests.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, std::string>> input_digests;
  std::vector<std::string> outputs;

  void add_parameter(std::string name, std::string value);
  /// Reads the file and records its keccak-256 content digest.
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace dexnet

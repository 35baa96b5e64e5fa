#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dexnet/core.hpp"

namespace dexnet {

/// One liquidity pool pairing two distinct tokens.
struct Pool {
  std::string address;  // canonical "0x" + 40 lowercase hex
  TokenId token0;
  TokenId token1;
  Platform platform;
};

/// Pool lookup table keyed by canonical pool address. Iteration order is
/// address-ascending. Duplicate and self-paired additions are counted rather
/// than raised; the last duplicate wins.
class PoolRegistry {
 public:
  enum class AddResult { added, replaced_duplicate, rejected_self_pair };

  AddResult add(Pool pool);

  const Pool* find(std::string_view address) const;

  std::size_t size() const { return pools_.size(); }
  bool empty() const { return pools_.empty(); }

  const std::map<std::string, Pool>& pools() const { return pools_; }
  const std::map<std::string, std::size_t>& platform_counts() const { return platform_counts_; }

  std::size_t duplicates() const { return duplicates_; }
  std::size_t rejected_self_pairs() const { return rejected_self_pairs_; }

 private:
  std::map<std::string, Pool> pools_;
  std::map<std::string, std::size_t> platform_counts_;
  std::size_t duplicates_ = 0;
  std::size_t rejected_self_pairs_ = 0;
};

/// One pool-touching transfer event at a block height.
struct TransferRecord {
  BlockHeight block = 0;
  std::string pool;
  Platform platform;
};

/// A transfer resolved to its pool's token pair. The pair is canonical:
/// a.address() < b.address().
struct EdgeEvent {
  BlockHeight block = 0;
  TokenId a;
  TokenId b;
  Platform platform;

  static EdgeEvent make(BlockHeight block, TokenId x, TokenId y, Platform platform);
};

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct ParseOptions {
  /// Abort (throw ParseError) once more than this many per-line errors
  /// have been collected.
  std::size_t max_errors = 1000;
};

struct RegistryParseResult {
  PoolRegistry registry;
  std::vector<ParseIssue> errors;
};

/// Parses line-delimited JSON pool records with fields pool, token0, token1,
/// platform and optional symbol0/symbol1. Malformed lines are collected per
/// line; parsing aborts only past ParseOptions::max_errors.
RegistryParseResult parse_pool_registry(std::istream& in, const ParseOptions& opts = {});

/// File variant; accepts gzip-compressed input by ".gz" extension.
RegistryParseResult load_pool_registry(const std::filesystem::path& path,
                                       const ParseOptions& opts = {});

struct TransferParseResult {
  std::vector<TransferRecord> records;  // sorted by block ascending (stable)
  std::vector<ParseIssue> errors;
  std::size_t out_of_range = 0;
};

/// Parses line-delimited JSON transfer records with fields block, pool,
/// platform. Records outside `range` are dropped and counted; output is
/// stably sorted by block.
TransferParseResult parse_transfers(std::istream& in, const BlockRange& range,
                                    const ParseOptions& opts = {});

TransferParseResult load_transfers(const std::filesystem::path& path, const BlockRange& range,
                                   const ParseOptions& opts = {});

struct ResolveResult {
  std::vector<EdgeEvent> events;
  std::size_t unknown_pools = 0;
};

/// Joins each record against the registry; records on unknown pools are
/// skipped and counted. Always: events.size() + unknown_pools == records.size().
ResolveResult resolve_edge_events(std::span<const TransferRecord> records,
                                  const PoolRegistry& registry);

}  // namespace dexnet

#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "dexnet/core.hpp"
#include "dexnet/ingest.hpp"

namespace dexnet {

struct RpcOptions {
  std::size_t parallelism = 8;
  std::size_t batch_size = 100;  // eth_call requests per JSON-RPC batch
  std::size_t max_retries = 3;   // extra attempts after the first failure
  std::chrono::milliseconds retry_base_delay{100};  // doubled per attempt
  std::chrono::milliseconds timeout{30000};

  void validate() const;
};

/// Walks a factory contract over JSON-RPC: allPairsLength(), then allPairs(i)
/// for every index, then token0()/token1() per pool. Batches are fetched by a
/// small worker pool and merged back in index order, so output is independent
/// of request timing. Transient failures (connect errors, HTTP 429/5xx) are
/// retried with exponential backoff up to max_retries, then raised as
/// TransportError. Short or malformed call results raise DecodeError naming
/// the offending call.
PoolRegistry fetch_pool_registry(const std::string& endpoint, const std::string& factory,
                                 Platform platform, const RpcOptions& options = {});

}  // namespace dexnet

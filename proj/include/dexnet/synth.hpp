#pragma once

#include <cstdint>
#include <vector>

#include "dexnet/core.hpp"
#include "dexnet/ingest.hpp"

namespace dexnet {

/// Knobs for the synthetic transfer-stream generator. Token 0 is the hub;
/// every later token opens exactly one pool, pairing with the hub with
/// probability hub_fraction and otherwise with an existing token drawn with
/// probability proportional to (pool count)^attachment_exponent. Transfers
/// land on pools with Zipf-distributed popularity at uniform random blocks.
struct SynthParams {
  std::size_t n_tokens = 1000;
  std::size_t n_transfers = 10000;
  double hub_fraction = 0.7;
  double attachment_exponent = 1.0;
  double zipf_exponent = 1.1;
  BlockRange range = BlockRange(1, 1000000);
  std::uint64_t seed = 0;
  Platform platform;

  /// Throws InvalidArgumentError on out-of-range values.
  void validate() const;
};

struct SynthStream {
  PoolRegistry registry;
  std::vector<TransferRecord> transfers;
};

/// Deterministic for a fixed parameter set: one seeded generator drives
/// attachment, popularity, and block placement in a fixed draw order.
SynthStream generate_stream(const SynthParams& params);

}  // namespace dexnet

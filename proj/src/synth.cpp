#include "dexnet/synth.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dexnet/error.hpp"
#include "dexnet/rand_util.hpp"

namespace dexnet {

namespace {

/// Fenwick tree over per-token attachment weights, so degree-proportional
/// sampling stays O(log n) per draw while weights change.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0) {}

  void add(std::size_t i, double delta) {
    for (std::size_t p = i + 1; p < tree_.size(); p += p & (~p + 1)) {
      tree_[p] += delta;
    }
  }

  double total() const {
    double sum = 0.0;
    for (std::size_t p = tree_.size() - 1; p > 0; p -= p & (~p + 1)) {
      sum += tree_[p];
    }
    return sum;
  }

  /// Smallest index whose prefix sum exceeds `target` (0 <= target < total).
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t mask = 1;
    while (mask * 2 < tree_.size()) {
      mask *= 2;
    }
    for (; mask > 0; mask /= 2) {
      const std::size_t next = pos + mask;
      if (next < tree_.size() && tree_[next] <= target) {
        target -= tree_[next];
        pos = next;
      }
    }
    return pos;  // 0-based element index
  }

 private:
  std::vector<double> tree_;
};

std::string hex_address(unsigned ns, std::uint64_t index) {
  return fmt::format("0x{:04x}{:036x}", ns, index);
}

std::string token_address(std::uint64_t index) { return hex_address(1, index); }
std::string pool_address(std::uint64_t index) { return hex_address(2, index); }

std::string token_symbol(std::uint64_t index) {
  return index == 0 ? "HUB" : fmt::format("T{:06}", index);
}

}  // namespace

void SynthParams::validate() const {
  if (n_tokens < 2) {
    throw InvalidArgumentError("need at least 2 tokens to form a pool");
  }
  if (n_transfers == 0) {
    throw InvalidArgumentError("need at least 1 transfer");
  }
  if (!(hub_fraction >= 0.0 && hub_fraction <= 1.0)) {
    throw InvalidArgumentError("hub_fraction must lie in [0, 1]");
  }
  if (!(attachment_exponent >= 0.0)) {
    throw InvalidArgumentError("attachment_exponent must be non-negative");
  }
  if (!(zipf_exponent >= 0.0)) {
    throw InvalidArgumentError("zipf_exponent must be non-negative");
  }
}

SynthStream generate_stream(const SynthParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  SynthStream out;

  // Pool creation. pool_count[i] = pools token i participates in.
  std::vector<std::uint64_t> pool_count(params.n_tokens, 0);
  WeightTree weights(params.n_tokens);
  // Tokens without any pool are not attachment candidates; pow(0, 0) = 1
  // would otherwise make them eligible under exponent 0.
  auto attach_weight = [&](std::size_t i) {
    return pool_count[i] == 0
               ? 0.0
               : std::pow(static_cast<double>(pool_count[i]), params.attachment_exponent);
  };

  const std::size_t n_pools = params.n_tokens - 1;
  std::vector<std::pair<std::size_t, std::size_t>> pool_tokens;
  pool_tokens.reserve(n_pools);
  for (std::size_t i = 1; i < params.n_tokens; ++i) {
    std::size_t target = 0;
    if (uniform_unit(rng) >= params.hub_fraction) {
      const double total = weights.total();
      if (total > 0.0) {
        double draw = uniform_unit(rng) * total;
        if (draw >= total) {
          draw = std::nextafter(total, 0.0);  // rounding can land exactly on total
        }
        target = weights.find(draw);
      }
      // With no weighted candidate yet (first token, or exponent 0 with no
      // pools), the hub takes the pool.
    }
    const double old_t = attach_weight(target);
    const double old_i = attach_weight(i);
    ++pool_count[target];
    ++pool_count[i];
    weights.add(target, attach_weight(target) - old_t);
    weights.add(i, attach_weight(i) - old_i);
    pool_tokens.emplace_back(i, target);
  }

  for (std::size_t p = 0; p < pool_tokens.size(); ++p) {
    const auto [i, target] = pool_tokens[p];
    Pool pool;
    pool.address = pool_address(p);
    pool.token0 = TokenId::from_address(token_address(i), token_symbol(i));
    pool.token1 = TokenId::from_address(token_address(target), token_symbol(target));
    pool.platform = params.platform;
    out.registry.add(std::move(pool));
  }

  // Zipf popularity over pools in creation order: weight of rank r is
  // 1 / (r+1)^s. Cumulative table + binary search keeps draws cheap.
  std::vector<double> cumulative(n_pools);
  double acc = 0.0;
  for (std::size_t r = 0; r < n_pools; ++r) {
    acc += 1.0 / std::pow(static_cast<double>(r + 1), params.zipf_exponent);
    cumulative[r] = acc;
  }

  const std::uint64_t n_blocks = params.range.block_count();
  out.transfers.reserve(params.n_transfers);
  for (std::size_t t = 0; t < params.n_transfers; ++t) {
    const double u = uniform_unit(rng) * acc;
    const std::size_t pool_idx = static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    TransferRecord rec;
    rec.block = params.range.start + uniform_below(rng, n_blocks);
    rec.pool = pool_address(std::min(pool_idx, n_pools - 1));
    rec.platform = params.platform;
    out.transfers.push_back(std::move(rec));
  }
  return out;
}

}  // namespace dexnet

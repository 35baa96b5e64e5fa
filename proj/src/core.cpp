#include "dexnet/core.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>

namespace dexnet {

namespace {

bool is_hex_digit(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

}  // namespace

std::string canonical_address(std::string_view address) {
  if (address.size() >= 2 && address[0] == '0' && (address[1] == 'x' || address[1] == 'X')) {
    address.remove_prefix(2);
  }
  if (address.size() != 40) {
    throw InvalidArgumentError(
        fmt::format("address must be 40 hex characters, got {} in \"{}\"", address.size(),
                    std::string(address)));
  }
  std::string out = "0x";
  out.reserve(42);
  for (char c : address) {
    if (!is_hex_digit(c)) {
      throw InvalidArgumentError(fmt::format("address contains non-hex character '{}'", c));
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

TokenId TokenId::from_address(std::string_view address, std::string symbol) {
  TokenId id;
  id.address_ = canonical_address(address);
  id.symbol_ = std::move(symbol);
  return id;
}

Platform Platform::named(std::string_view name) {
  if (name.empty()) {
    throw InvalidArgumentError("platform name must be nonempty");
  }
  std::string lowered(name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return Platform(std::move(lowered));
}

TimeSegmentation segment_blocks(const BlockRange& range, std::size_t n) {
  const std::uint64_t blocks = range.block_count();
  if (n == 0) {
    throw InvalidSegmentationError("segment count must be positive");
  }
  if (n > blocks) {
    throw InvalidSegmentationError(
        fmt::format("cannot split {} blocks into {} segments", blocks, n));
  }
  const std::uint64_t width = blocks / n;
  std::vector<BlockHeight> boundaries(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    boundaries[i] = range.start + width * i;
  }
  boundaries[n] = range.end + 1;  // last segment absorbs the remainder
  return TimeSegmentation(range, std::move(boundaries));
}

SliceIndex slice_of_block(const TimeSegmentation& seg, BlockHeight block) {
  if (!seg.range().contains(block)) {
    throw OutOfRangeError(fmt::format("block {} outside segmented range [{}, {}]", block,
                                      seg.range().start, seg.range().end));
  }
  const auto& b = seg.boundaries();
  // First boundary strictly greater than block; its predecessor opens the slice.
  auto it = std::upper_bound(b.begin(), b.end(), block);
  return SliceIndex(static_cast<std::size_t>(it - b.begin()));
}

}  // namespace dexnet

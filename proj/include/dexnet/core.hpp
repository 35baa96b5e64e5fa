#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dexnet/error.hpp"

namespace dexnet {

inline constexpr const char* kVersion = "0.1.0";

using BlockHeight = std::uint64_t;

/// Token identity. Equality and ordering are by lowercased address only;
/// the symbol is display metadata and never participates in comparisons.
class TokenId {
 public:
  TokenId() = default;

  /// Accepts a 40-hex-character address with or without a "0x"/"0X" prefix,
  /// in any letter case. Stored canonically as "0x" + 40 lowercase hex.
  static TokenId from_address(std::string_view address, std::string symbol = "");

  const std::string& address() const { return address_; }
  const std::string& symbol() const { return symbol_; }

  bool operator==(const TokenId& other) const { return address_ == other.address_; }
  std::strong_ordering operator<=>(const TokenId& other) const {
    return address_ <=> other.address_;
  }

 private:
  std::string address_;
  std::string symbol_;
};

/// Canonicalizes a 20-byte hex identifier (token or pool address).
/// Throws InvalidArgumentError unless the input is exactly 40 hex characters
/// after prefix stripping.
std::string canonical_address(std::string_view address);

/// Source platform tag. Two platforms are predefined; any other named
/// platform is accepted through `named`.
class Platform {
 public:
  Platform() : name_("uniswap") {}

  static Platform uniswap() { return Platform("uniswap"); }
  static Platform sushiswap() { return Platform("sushiswap"); }

  /// Lowercases the name; throws InvalidArgumentError when empty.
  static Platform named(std::string_view name);

  const std::string& name() const { return name_; }

  bool operator==(const Platform& other) const = default;
  std::strong_ordering operator<=>(const Platform& other) const = default;

 private:
  explicit Platform(std::string name) : name_(std::move(name)) {}
  std::string name_;
};

/// Inclusive block interval [start, end].
struct BlockRange {
  BlockHeight start = 0;
  BlockHeight end = 0;

  BlockRange() = default;
  BlockRange(BlockHeight s, BlockHeight e) : start(s), end(e) {
    if (start > end) {
      throw InvalidArgumentError("block range start exceeds end");
    }
  }

  /// Number of blocks covered, end - start + 1.
  std::uint64_t block_count() const { return end - start + 1; }

  bool contains(BlockHeight block) const { return block >= start && block <= end; }

  bool operator==(const BlockRange&) const = default;
};

/// Index of one time slice. Value 0 denotes the entire range (t_0);
/// values 1..n address the equal segments.
class SliceIndex {
 public:
  SliceIndex() = default;
  explicit SliceIndex(std::size_t value) : value_(value) {}

  static SliceIndex whole() { return SliceIndex(0); }

  std::size_t value() const { return value_; }
  bool is_whole() const { return value_ == 0; }

  bool operator==(const SliceIndex&) const = default;
  std::strong_ordering operator<=>(const SliceIndex&) const = default;

 private:
  std::size_t value_ = 0;
};

/// Partition of a block range into n half-open segments
/// [boundaries[i-1], boundaries[i]) for slice i in 1..n. Immutable.
class TimeSegmentation {
 public:
  const BlockRange& range() const { return range_; }
  std::size_t segment_count() const { return boundaries_.size() - 1; }
  const std::vector<BlockHeight>& boundaries() const { return boundaries_; }

  /// First block of slice i (1-based).
  BlockHeight segment_begin(std::size_t i) const { return boundaries_[i - 1]; }
  /// One past the last block of slice i (1-based).
  BlockHeight segment_end(std::size_t i) const { return boundaries_[i]; }

 private:
  friend TimeSegmentation segment_blocks(const BlockRange&, std::size_t);
  TimeSegmentation(BlockRange range, std::vector<BlockHeight> boundaries)
      : range_(range), boundaries_(std::move(boundaries)) {}

  BlockRange range_;
  std::vector<BlockHeight> boundaries_;
};

/// Splits `range` into n equal-width segments by integer division; the last
/// segment absorbs the remainder. Throws InvalidSegmentationError when n is
/// zero or larger than the number of blocks in the range.
TimeSegmentation segment_blocks(const BlockRange& range, std::size_t n);

/// Returns the unique slice i >= 1 whose half-open interval contains `block`.
/// Throws OutOfRangeError when the block lies outside the segmented range.
SliceIndex slice_of_block(const TimeSegmentation& seg, BlockHeight block);

}  // namespace dexnet

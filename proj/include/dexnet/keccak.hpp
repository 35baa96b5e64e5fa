#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace dexnet {

/// Keccak-256 (the pre-SHA3 padding variant used by Ethereum).
std::array<std::uint8_t, 32> keccak256(std::span<const std::uint8_t> data);

/// Hash of a byte string, returned as 64 lowercase hex characters.
std::string keccak256_hex(std::string_view data);

/// 4-byte ABI function selector for a canonical signature such as
/// "allPairs(uint256)", as 8 lowercase hex characters.
std::string function_selector(std::string_view signature);

}  // namespace dexnet

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qwalk {

using Bits = std::vector<std::uint8_t>;

/// A bit string grouped into cycle symbols. Each symbol carries
/// floor(log2 N) bits, big-endian; the last symbol is zero-padded.
struct Message {
  Bits bits;
  std::vector<int> symbols;
  int padding = 0;
  int bits_per_symbol = 1;

  bool operator==(const Message&) const = default;
};

int bits_per_symbol(int cycle_length);

Message chunk_message(const Bits& bits, int cycle_length);

/// Rebuilds the message from decoded symbols; inverse of chunk_message
/// given the original bit length.
Message message_from_symbols(const std::vector<int>& symbols, int cycle_length, std::size_t bit_count);

Bits unchunk(const Message& message);

Bits parse_bits(std::string_view text);
std::string bits_to_string(const Bits& bits);

}  // namespace qwalk

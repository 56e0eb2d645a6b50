#include "qwalk/message.hpp"

#include <stdexcept>

namespace qwalk {

int bits_per_symbol(int cycle_length) {
  if (cycle_length < 2) throw std::invalid_argument("cycle length must be >= 2");
  int bits = 0;
  while ((2LL << bits) <= cycle_length) ++bits;
  return bits;
}

Message chunk_message(const Bits& bits, int cycle_length) {
  Message msg;
  msg.bits_per_symbol = bits_per_symbol(cycle_length);
  msg.bits = bits;
  const int k = msg.bits_per_symbol;
  for (std::size_t start = 0; start < bits.size(); start += k) {
    int symbol = 0;
    for (int j = 0; j < k; ++j) {
      const std::size_t pos = start + j;
      const int bit = pos < bits.size() ? bits[pos] : 0;
      if (bit > 1) throw std::invalid_argument("bits must be 0 or 1");
      symbol = (symbol << 1) | bit;
    }
    msg.symbols.push_back(symbol);
  }
  const std::size_t rem = bits.size() % k;
  msg.padding = rem == 0 ? 0 : static_cast<int>(k - rem);
  return msg;
}

Message message_from_symbols(const std::vector<int>& symbols, int cycle_length, std::size_t bit_count) {
  const int k = bits_per_symbol(cycle_length);
  const std::size_t capacity = symbols.size() * static_cast<std::size_t>(k);
  if (bit_count > capacity) throw std::invalid_argument("not enough symbols for the requested bit count");
  Message msg;
  msg.bits_per_symbol = k;
  msg.symbols = symbols;
  // Symbols outside the k-bit range (possible after a disturbed channel)
  // keep their raw value; only their low k bits enter the bit string.
  for (int s : symbols)
    for (int j = k - 1; j >= 0; --j) msg.bits.push_back(static_cast<std::uint8_t>((s >> j) & 1));
  msg.bits.resize(bit_count);
  msg.padding = static_cast<int>(capacity - bit_count);
  return msg;
}

Bits unchunk(const Message& message) {
  const int k = message.bits_per_symbol;
  Bits bits;
  for (int s : message.symbols)
    for (int j = k - 1; j >= 0; --j) bits.push_back(static_cast<std::uint8_t>((s >> j) & 1));
  bits.resize(bits.size() - message.padding);
  return bits;
}

Bits parse_bits(std::string_view text) {
  Bits bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else {
      throw std::invalid_argument(std::string("invalid bit character '") + ch + "'");
    }
  }
  return bits;
}

std::string bits_to_string(const Bits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

}  // namespace qwalk

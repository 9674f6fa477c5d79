#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerchat/error.hpp"

namespace ledgerchat {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

template <std::size_t N>
using ByteArray = std::array<std::uint8_t, N>;

using Key32 = ByteArray<32>;
using Hash32 = ByteArray<32>;

inline ByteView AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string AsString(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

inline Bytes ToBytes(std::string_view s) {
  auto v = AsBytes(s);
  return {v.begin(), v.end()};
}

std::string ToHex(ByteView data);
// Throws Error(kFormat) on odd length or non-hex characters.
Bytes FromHex(std::string_view hex);

template <std::size_t N>
ByteArray<N> ArrayFromHex(std::string_view hex);

std::string Base64Encode(ByteView data);
Bytes Base64Decode(std::string_view text);

bool IsAllZero(ByteView data);

// True when `needle` occurs anywhere inside `haystack`.
bool ContainsSubsequence(ByteView haystack, ByteView needle);

template <std::size_t N>
ByteArray<N> ArrayFromHex(std::string_view hex) {
  Bytes raw = FromHex(hex);
  if (raw.size() != N) {
    throw Error(ErrorCode::kFormat, "expected " + std::to_string(N) +
                                        " bytes of hex, got " +
                                        std::to_string(raw.size()));
  }
  ByteArray<N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

}  // namespace ledgerchat

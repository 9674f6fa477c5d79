#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ledgerchat/bytes.hpp"

namespace ledgerchat {

// Canonical encoding used for hashing, signing, persistence and the wire:
// every field is a 4-byte big-endian length followed by that many bytes, in
// declaration order. Integers are 8-byte big-endian inside their field.
class CanonicalWriter {
 public:
  CanonicalWriter& Field(ByteView data);
  CanonicalWriter& Field(std::string_view text) { return Field(AsBytes(text)); }
  CanonicalWriter& U64(std::uint64_t value);
  CanonicalWriter& I64(std::int64_t value) {
    return U64(static_cast<std::uint64_t>(value));
  }
  CanonicalWriter& U8(std::uint8_t value);

  template <std::size_t N>
  CanonicalWriter& Field(const ByteArray<N>& data) {
    return Field(ByteView(data));
  }

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

// Strict reader: every accessor throws Error(kFormat) on truncation or a
// length that does not match the expected fixed size.
class CanonicalReader {
 public:
  explicit CanonicalReader(ByteView data) : data_(data) {}

  ByteView Field();
  std::string Text();
  std::uint64_t U64();
  std::int64_t I64() { return static_cast<std::int64_t>(U64()); }
  std::uint8_t U8();

  template <std::size_t N>
  ByteArray<N> Fixed() {
    ByteView f = Field();
    if (f.size() != N) {
      throw Error(ErrorCode::kFormat, "field has " + std::to_string(f.size()) +
                                          " bytes, expected " +
                                          std::to_string(N));
    }
    ByteArray<N> out{};
    std::copy(f.begin(), f.end(), out.begin());
    return out;
  }

  bool AtEnd() const { return pos_ == data_.size(); }
  // Throws unless every byte has been consumed.
  void ExpectEnd() const;

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

// Big-endian helpers for the fixed binary layouts (chain file, backup).
void PutU32BE(Bytes& out, std::uint32_t value);
std::uint32_t GetU32BE(ByteView in, std::size_t offset);

}  // namespace ledgerchat

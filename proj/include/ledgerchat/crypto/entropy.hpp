#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "ledgerchat/bytes.hpp"

namespace ledgerchat::crypto {

// Source of key-generation randomness. Fill() throws Error(kEntropy) when it
// cannot supply every requested byte.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual void Fill(std::span<std::uint8_t> out) = 0;

  template <std::size_t N>
  ByteArray<N> Draw() {
    ByteArray<N> out{};
    Fill(out);
    return out;
  }
};

// Operating-system CSPRNG.
class SystemEntropy final : public EntropySource {
 public:
  void Fill(std::span<std::uint8_t> out) override;
};

// Replays a fixed byte string, then fails. For known-answer tests.
class FixedEntropy final : public EntropySource {
 public:
  explicit FixedEntropy(Bytes bytes) : bytes_(std::move(bytes)) {}
  void Fill(std::span<std::uint8_t> out) override;

 private:
  Bytes bytes_;
  std::size_t pos_ = 0;
};

SystemEntropy& DefaultEntropy();

}  // namespace ledgerchat::crypto

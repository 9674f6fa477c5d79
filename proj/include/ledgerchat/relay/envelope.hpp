#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ledgerchat/bytes.hpp"
#include "ledgerchat/crypto/crypto.hpp"

namespace ledgerchat::relay {

// The wire unit. Every field except `payload` is bound into the MAC as
// associated data (see HeaderBytes), so a relay cannot rewrite it unnoticed.
struct Envelope {
  std::string sender_id;
  // Empty for group envelopes; the relay routes those by membership.
  std::string recipient_id;
  std::uint64_t counter = 0;
  Hash32 sender_cert_fingerprint{};
  std::optional<std::string> group_id;
  crypto::SealedPayload payload;
  std::int64_t sent_at = 0;

  bool operator==(const Envelope&) const = default;
};

// Canonical header bytes: sender, recipient, counter, fingerprint,
// group flag, group id, sent_at.
Bytes HeaderBytes(const Envelope& envelope);

// Header fields followed by ciphertext and MAC.
Bytes Serialize(const Envelope& envelope);
Envelope ParseEnvelope(ByteView bytes);

}  // namespace ledgerchat::relay

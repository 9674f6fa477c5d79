#pragma once

// Identity keys, key agreement, the symmetric chain-key ratchet, and
// encrypt-then-MAC sealing. Everything except key generation is a pure
// function of its arguments.

#include <cstdint>
#include <string_view>

#include "ledgerchat/bytes.hpp"
#include "ledgerchat/crypto/entropy.hpp"

namespace ledgerchat::crypto {

inline constexpr std::size_t kMacSize = 32;
inline constexpr std::size_t kIvSize = 16;
inline constexpr std::size_t kSaltSize = 16;
inline constexpr std::size_t kKeyMaterialSize = 80;  // cipher || mac || iv
inline constexpr std::size_t kDefaultMaxPlaintext = 1u << 20;
inline constexpr std::uint32_t kMinBackupIterations = 10'000;
inline constexpr std::uint32_t kDefaultBackupIterations = 210'000;

using Mac = ByteArray<kMacSize>;
using Iv = ByteArray<kIvSize>;
using Salt = ByteArray<kSaltSize>;

// Curve25519 identity. `public_key` is always the X25519 base-point multiple
// of the clamped `private_key`.
struct IdentityKeyPair {
  Key32 private_key{};
  Key32 public_key{};

  bool operator==(const IdentityKeyPair&) const = default;
};

IdentityKeyPair GenerateIdentityKeyPair(EntropySource& rng);
// Clamps `private_key` and derives the matching public key.
IdentityKeyPair IdentityFromPrivate(const Key32& private_key);

struct MasterSecret {
  Key32 bytes{};

  bool operator==(const MasterSecret&) const = default;
};

// X25519. Throws kKeyAgreement when the result is all zero (low-order peer
// point).
MasterSecret DeriveMasterSecret(const Key32& own_private,
                                const Key32& peer_public);

enum class Direction : std::uint8_t { kSend = 0, kReceive = 1 };

struct ChainKey {
  Key32 key{};
  std::uint64_t index = 0;
  Direction direction = Direction::kSend;

  bool operator==(const ChainKey&) const = default;
};

struct ChainPair {
  ChainKey send;
  ChainKey receive;
};

// Root chains for one session, as seen by `self_id` talking to `peer_id`.
// The two directional keys are HKDF-SHA256 outputs with a zero salt and info
// "chain|<lo>|<hi>|A→B" / "chain|<lo>|<hi>|B→A" where lo < hi byte-wise and
// A is lo. Throws kArgument when the ids are equal.
ChainPair InitChains(const MasterSecret& master, std::string_view self_id,
                     std::string_view peer_id);

struct MessageKey {
  Key32 cipher_key{};
  Key32 mac_key{};
  Iv iv{};
  std::uint64_t index = 0;

  bool operator==(const MessageKey&) const = default;
};

struct RatchetStep {
  MessageKey message_key;
  ChainKey next;
};

// message material = HKDF(HMAC(ck, 0x01), 0^32, "msg", 80)
// next chain key   = HMAC(ck, 0x02)
RatchetStep RatchetForward(const ChainKey& chain);

// HKDF(ikm, 0^32, info, 80) split into a MessageKey. Used to turn long-lived
// secrets (backup keys, group keys) into sealing keys.
MessageKey ExpandMessageKey(ByteView ikm, std::string_view info,
                            std::uint64_t index = 0);

struct SealedPayload {
  Bytes ciphertext;
  Mac mac{};

  bool operator==(const SealedPayload&) const = default;
};

// AES-256-CBC(PKCS#7) then HMAC-SHA256 over associated_data || ciphertext.
SealedPayload Seal(const MessageKey& key, ByteView plaintext,
                   ByteView associated_data,
                   std::size_t max_plaintext = kDefaultMaxPlaintext);

// Verifies the MAC in constant time before touching the ciphertext.
// kAuthentication on MAC mismatch, kCorruption on bad padding behind a valid
// MAC, kFormat when the ciphertext is not a positive multiple of 16 bytes.
Bytes Unseal(const MessageKey& key, const SealedPayload& payload,
             ByteView associated_data);

struct BackupKey {
  Key32 key{};
  Salt salt{};
  std::uint32_t iterations = 0;
};

struct KdfPolicy {
  std::uint32_t min_iterations = kMinBackupIterations;
};

// PBKDF2-HMAC-SHA256 over the passphrase.
BackupKey DeriveBackupKey(std::string_view secret, const Salt& salt,
                          std::uint32_t iterations, KdfPolicy policy = {});

// --- signatures --------------------------------------------------------------

using Signature = ByteArray<64>;

// Signs with a Curve25519 identity key (XEdDSA), so one X25519 key serves
// both key agreement and proof of possession.
Signature SignWithIdentity(const Key32& identity_private, ByteView message,
                           EntropySource& rng);
bool VerifyIdentitySignature(const Key32& identity_public, ByteView message,
                             const Signature& signature);

// Ed25519 keys for certificate issuers and chain writers.
struct SigningKeyPair {
  ByteArray<64> secret{};  // libsodium layout: seed || public key
  Key32 public_key{};
};

SigningKeyPair GenerateSigningKeyPair(EntropySource& rng);
SigningKeyPair SigningKeyPairFromSeed(const Key32& seed);
Signature Sign(const SigningKeyPair& key, ByteView message);
bool Verify(const Key32& public_key, ByteView message,
            const Signature& signature);

}  // namespace ledgerchat::crypto

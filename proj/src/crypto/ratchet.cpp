#include <sodium.h>

#include <algorithm>
#include <string>

#include "ledgerchat/crypto/crypto.hpp"
#include "ledgerchat/crypto/primitives.hpp"

namespace ledgerchat::crypto {

namespace {

constexpr std::uint8_t kMessageKeySeed = 0x01;
constexpr std::uint8_t kChainKeySeed = 0x02;
constexpr Key32 kZeroSalt{};
constexpr std::string_view kArrow = "\xE2\x86\x92";  // U+2192

void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error(ErrorCode::kEntropy, "libsodium failed to initialise");
}

Key32 Clamp(Key32 scalar) {
  scalar[0] &= 248;
  scalar[31] &= 127;
  scalar[31] |= 64;
  return scalar;
}

MessageKey SplitMaterial(const Bytes& material, std::uint64_t index) {
  MessageKey mk;
  auto it = material.begin();
  std::copy_n(it, 32, mk.cipher_key.begin());
  std::copy_n(it + 32, 32, mk.mac_key.begin());
  std::copy_n(it + 64, kIvSize, mk.iv.begin());
  mk.index = index;
  return mk;
}

}  // namespace

// --- entropy ------------------------------------------------------------------

void SystemEntropy::Fill(std::span<std::uint8_t> out) {
  EnsureSodium();
  randombytes_buf(out.data(), out.size());
}

void FixedEntropy::Fill(std::span<std::uint8_t> out) {
  if (bytes_.size() - pos_ < out.size()) {
    throw Error(ErrorCode::kEntropy,
                "entropy source exhausted: wanted " +
                    std::to_string(out.size()) + " bytes, have " +
                    std::to_string(bytes_.size() - pos_));
  }
  std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), out.size(),
              out.begin());
  pos_ += out.size();
}

SystemEntropy& DefaultEntropy() {
  static SystemEntropy entropy;
  return entropy;
}

// --- identity and agreement -------------------------------------------------

IdentityKeyPair GenerateIdentityKeyPair(EntropySource& rng) {
  return IdentityFromPrivate(rng.Draw<32>());
}

IdentityKeyPair IdentityFromPrivate(const Key32& private_key) {
  EnsureSodium();
  IdentityKeyPair pair;
  pair.private_key = Clamp(private_key);
  if (crypto_scalarmult_base(pair.public_key.data(),
                             pair.private_key.data()) != 0) {
    throw Error(ErrorCode::kKeyAgreement, "invalid identity scalar");
  }
  return pair;
}

MasterSecret DeriveMasterSecret(const Key32& own_private,
                                const Key32& peer_public) {
  EnsureSodium();
  MasterSecret out;
  // crypto_scalarmult fails on an all-zero result, i.e. a low-order point.
  if (crypto_scalarmult(out.bytes.data(), own_private.data(),
                        peer_public.data()) != 0 ||
      IsAllZero(out.bytes)) {
    throw Error(ErrorCode::kKeyAgreement,
                "key agreement produced the all-zero secret");
  }
  return out;
}

// --- chains -----------------------------------------------------------------

ChainPair InitChains(const MasterSecret& master, std::string_view self_id,
                     std::string_view peer_id) {
  if (self_id == peer_id) {
    throw Error(ErrorCode::kArgument, "session ids must differ");
  }
  const bool self_is_lo = self_id < peer_id;
  const std::string_view lo = self_is_lo ? self_id : peer_id;
  const std::string_view hi = self_is_lo ? peer_id : self_id;
  const std::string base =
      "chain|" + std::string(lo) + "|" + std::string(hi) + "|";
  const std::string a_to_b = base + "A" + std::string(kArrow) + "B";
  const std::string b_to_a = base + "B" + std::string(kArrow) + "A";

  auto derive = [&](const std::string& info) {
    Bytes okm = Hkdf(master.bytes, kZeroSalt, AsBytes(info), 32);
    Key32 key{};
    std::copy(okm.begin(), okm.end(), key.begin());
    SecureWipe(okm);
    return key;
  };

  ChainPair pair;
  pair.send.key = derive(self_is_lo ? a_to_b : b_to_a);
  pair.send.direction = Direction::kSend;
  pair.receive.key = derive(self_is_lo ? b_to_a : a_to_b);
  pair.receive.direction = Direction::kReceive;
  return pair;
}

RatchetStep RatchetForward(const ChainKey& chain) {
  const std::uint8_t message_seed[1] = {kMessageKeySeed};
  const std::uint8_t chain_seed[1] = {kChainKeySeed};

  Hash32 ikm = HmacSha256(chain.key, message_seed);
  Bytes material = Hkdf(ikm, kZeroSalt, AsBytes("msg"), kKeyMaterialSize);

  RatchetStep step;
  step.message_key = SplitMaterial(material, chain.index);
  step.next.key = HmacSha256(chain.key, chain_seed);
  step.next.index = chain.index + 1;
  step.next.direction = chain.direction;
  SecureWipe(ikm);
  SecureWipe(material);
  return step;
}

MessageKey ExpandMessageKey(ByteView ikm, std::string_view info,
                            std::uint64_t index) {
  Bytes material = Hkdf(ikm, kZeroSalt, AsBytes(info), kKeyMaterialSize);
  MessageKey mk = SplitMaterial(material, index);
  SecureWipe(material);
  return mk;
}

// --- sealing ----------------------------------------------------------------

SealedPayload Seal(const MessageKey& key, ByteView plaintext,
                   ByteView associated_data, std::size_t max_plaintext) {
  if (plaintext.size() > max_plaintext) {
    throw Error(ErrorCode::kSize, "plaintext of " +
                                      std::to_string(plaintext.size()) +
                                      " bytes exceeds limit of " +
                                      std::to_string(max_plaintext));
  }
  Bytes padded = Pkcs7Pad(plaintext);
  SealedPayload out;
  out.ciphertext = AesCbcEncryptBlocks(key.cipher_key, key.iv, padded);
  out.mac = HmacSha256(key.mac_key, associated_data, out.ciphertext);
  SecureWipe(padded);
  return out;
}

Bytes Unseal(const MessageKey& key, const SealedPayload& payload,
             ByteView associated_data) {
  if (payload.ciphertext.empty() ||
      payload.ciphertext.size() % kBlockSize != 0) {
    throw Error(ErrorCode::kFormat,
                "ciphertext length is not a positive multiple of 16");
  }
  const Hash32 expected =
      HmacSha256(key.mac_key, associated_data, payload.ciphertext);
  if (!ConstantTimeEqual(expected, payload.mac)) {
    throw Error(ErrorCode::kAuthentication, "message authentication failed");
  }
  Bytes plain = AesCbcDecryptBlocks(key.cipher_key, key.iv, payload.ciphertext);
  if (!Pkcs7Unpad(plain)) {
    SecureWipe(plain);
    throw Error(ErrorCode::kCorruption, "invalid padding");
  }
  return plain;
}

// --- backup key -------------------------------------------------------------

BackupKey DeriveBackupKey(std::string_view secret, const Salt& salt,
                          std::uint32_t iterations, KdfPolicy policy) {
  if (secret.empty()) {
    throw Error(ErrorCode::kArgument, "backup secret must not be empty");
  }
  if (iterations == 0 || iterations < policy.min_iterations) {
    throw Error(ErrorCode::kArgument,
                "backup KDF iterations " + std::to_string(iterations) +
                    " below floor " + std::to_string(policy.min_iterations));
  }
  Bytes derived = Pbkdf2HmacSha256(AsBytes(secret), salt, iterations, 32);
  BackupKey out;
  std::copy(derived.begin(), derived.end(), out.key.begin());
  out.salt = salt;
  out.iterations = iterations;
  SecureWipe(derived);
  return out;
}

}  // namespace ledgerchat::crypto

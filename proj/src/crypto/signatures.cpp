#include <openssl/bn.h>
#include <openssl/evp.h>
#include <sodium.h>

#include <memory>

#include "ledgerchat/crypto/crypto.hpp"
#include "ledgerchat/crypto/primitives.hpp"

namespace ledgerchat::crypto {

namespace {

struct BnDeleter {
  void operator()(BIGNUM* bn) const { BN_free(bn); }
};
struct BnCtxDeleter {
  void operator()(BN_CTX* ctx) const { BN_CTX_free(ctx); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;

void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error(ErrorCode::kEntropy, "libsodium failed to initialise");
}

ByteArray<64> Sha512(ByteView a, ByteView b = {}, ByteView c = {},
                     ByteView d = {}) {
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  crypto_hash_sha512_update(&st, a.data(), a.size());
  crypto_hash_sha512_update(&st, b.data(), b.size());
  crypto_hash_sha512_update(&st, c.data(), c.size());
  crypto_hash_sha512_update(&st, d.data(), d.size());
  ByteArray<64> out{};
  crypto_hash_sha512_final(&st, out.data());
  return out;
}

Key32 ReduceScalar(ByteArray<64> wide) {
  Key32 out{};
  crypto_core_ed25519_scalar_reduce(out.data(), wide.data());
  return out;
}

Key32 ReduceScalar32(const Key32& narrow) {
  ByteArray<64> wide{};
  std::copy(narrow.begin(), narrow.end(), wide.begin());
  return ReduceScalar(wide);
}

// Birational map from a Montgomery u-coordinate to the Edwards point with
// sign bit 0: y = (u - 1) / (u + 1) mod 2^255 - 19.
bool MontgomeryToEdwards(const Key32& u_bytes, Key32& out) {
  Key32 masked = u_bytes;
  masked[31] &= 0x7f;
  std::unique_ptr<BN_CTX, BnCtxDeleter> ctx(BN_CTX_new());
  BnPtr p(BN_new()), u(BN_lebin2bn(masked.data(), 32, nullptr)), num(BN_new()),
      den(BN_new()), y(BN_new());
  if (!ctx || !p || !u || !num || !den || !y) return false;
  BN_set_bit(p.get(), 255);
  BN_sub_word(p.get(), 19);
  if (BN_cmp(u.get(), p.get()) >= 0) return false;
  BN_copy(num.get(), u.get());
  BN_copy(den.get(), u.get());
  if (BN_is_zero(num.get())) {
    BN_copy(num.get(), p.get());
  }
  BN_sub_word(num.get(), 1);
  BN_add_word(den.get(), 1);
  BN_mod(den.get(), den.get(), p.get(), ctx.get());
  if (BN_is_zero(den.get())) return false;
  if (BN_mod_inverse(den.get(), den.get(), p.get(), ctx.get()) == nullptr) {
    return false;
  }
  if (BN_mod_mul(y.get(), num.get(), den.get(), p.get(), ctx.get()) != 1) {
    return false;
  }
  return BN_bn2lebinpad(y.get(), out.data(), 32) == 32;
}

}  // namespace

Signature SignWithIdentity(const Key32& identity_private, ByteView message,
                           EntropySource& rng) {
  EnsureSodium();
  Key32 k = identity_private;
  k[0] &= 248;
  k[31] &= 127;
  k[31] |= 64;

  // E = kB; A is E with the sign bit cleared, a = +-k so that A = aB.
  Key32 edwards{};
  if (crypto_scalarmult_ed25519_base_noclamp(edwards.data(), k.data()) != 0) {
    throw Error(ErrorCode::kArgument, "invalid identity scalar");
  }
  Key32 a = ReduceScalar32(k);
  if (edwards[31] & 0x80) {
    Key32 negated{};
    crypto_core_ed25519_scalar_negate(negated.data(), a.data());
    a = negated;
  }
  Key32 public_a = edwards;
  public_a[31] &= 0x7f;

  ByteArray<64> z = rng.Draw<64>();
  ByteArray<32> domain{};
  domain.fill(0xff);
  domain[0] = 0xfe;
  Key32 r = ReduceScalar(Sha512(domain, a, message, z));

  Signature sig{};
  if (crypto_scalarmult_ed25519_base_noclamp(sig.data(), r.data()) != 0) {
    throw Error(ErrorCode::kArgument, "degenerate signing nonce");
  }
  ByteView big_r(sig.data(), 32);
  Key32 h = ReduceScalar(Sha512(big_r, public_a, message));
  Key32 ha{};
  crypto_core_ed25519_scalar_mul(ha.data(), h.data(), a.data());
  crypto_core_ed25519_scalar_add(sig.data() + 32, r.data(), ha.data());

  sodium_memzero(k.data(), k.size());
  sodium_memzero(a.data(), a.size());
  sodium_memzero(r.data(), r.size());
  return sig;
}

bool VerifyIdentitySignature(const Key32& identity_public, ByteView message,
                             const Signature& signature) {
  EnsureSodium();
  Key32 edwards{};
  if (!MontgomeryToEdwards(identity_public, edwards)) return false;
  // With A fixed to sign bit 0 this is exactly Ed25519 verification.
  return crypto_sign_ed25519_verify_detached(signature.data(), message.data(),
                                             message.size(),
                                             edwards.data()) == 0;
}

SigningKeyPair GenerateSigningKeyPair(EntropySource& rng) {
  return SigningKeyPairFromSeed(rng.Draw<32>());
}

SigningKeyPair SigningKeyPairFromSeed(const Key32& seed) {
  EnsureSodium();
  SigningKeyPair pair;
  crypto_sign_ed25519_seed_keypair(pair.public_key.data(), pair.secret.data(),
                                   seed.data());
  return pair;
}

Signature Sign(const SigningKeyPair& key, ByteView message) {
  EnsureSodium();
  Signature sig{};
  crypto_sign_ed25519_detached(sig.data(), nullptr, message.data(),
                               message.size(), key.secret.data());
  return sig;
}

bool Verify(const Key32& public_key, ByteView message,
            const Signature& signature) {
  EnsureSodium();
  return crypto_sign_ed25519_verify_detached(signature.data(), message.data(),
                                             message.size(),
                                             public_key.data()) == 0;
}

}  // namespace ledgerchat::crypto

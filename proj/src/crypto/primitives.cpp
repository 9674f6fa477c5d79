#include "ledgerchat/crypto/primitives.hpp"

#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>
#include <openssl/params.h>

#include <memory>

namespace ledgerchat::crypto {

namespace {

struct MacCtxDeleter {
  void operator()(EVP_MAC_CTX* ctx) const { EVP_MAC_CTX_free(ctx); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* ctx) const { EVP_PKEY_CTX_free(ctx); }
};

[[noreturn]] void Fail(const char* what) {
  throw Error(ErrorCode::kArgument, std::string("crypto backend: ") + what);
}

EVP_MAC* HmacAlgorithm() {
  static EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
  if (mac == nullptr) Fail("HMAC unavailable");
  return mac;
}

Bytes AesCbc(ByteView key, ByteView iv, ByteView data, bool encrypt) {
  if (key.size() != 32 || iv.size() != kBlockSize) {
    throw Error(ErrorCode::kArgument, "AES-256-CBC needs a 32-byte key and 16-byte IV");
  }
  if (data.size() % kBlockSize != 0) {
    throw Error(ErrorCode::kArgument, "CBC input is not block aligned");
  }
  std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx(EVP_CIPHER_CTX_new());
  if (!ctx ||
      EVP_CipherInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.data(),
                        iv.data(), encrypt ? 1 : 0) != 1 ||
      EVP_CIPHER_CTX_set_padding(ctx.get(), 0) != 1) {
    Fail("cipher init");
  }
  Bytes out(data.size());
  int len = 0;
  if (!data.empty() &&
      EVP_CipherUpdate(ctx.get(), out.data(), &len, data.data(),
                       static_cast<int>(data.size())) != 1) {
    Fail("cipher update");
  }
  int tail = 0;
  if (EVP_CipherFinal_ex(ctx.get(), out.data() + len, &tail) != 1) {
    Fail("cipher final");
  }
  return out;
}

}  // namespace

Hash32 Sha256(ByteView data) {
  Hash32 out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    Fail("sha256");
  }
  return out;
}

Hash32 HmacSha256(ByteView key, ByteView data) {
  return HmacSha256(key, data, {});
}

Hash32 HmacSha256(ByteView key, ByteView first, ByteView second) {
  std::unique_ptr<EVP_MAC_CTX, MacCtxDeleter> ctx(
      EVP_MAC_CTX_new(HmacAlgorithm()));
  char digest[] = "SHA256";
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest, 0),
      OSSL_PARAM_construct_end()};
  // EVP_MAC_init rejects a null key pointer even for length 0.
  static const std::uint8_t kEmpty[1] = {0};
  const std::uint8_t* key_ptr = key.empty() ? kEmpty : key.data();
  if (!ctx || EVP_MAC_init(ctx.get(), key_ptr, key.size(), params) != 1 ||
      EVP_MAC_update(ctx.get(), first.data(), first.size()) != 1 ||
      EVP_MAC_update(ctx.get(), second.data(), second.size()) != 1) {
    Fail("hmac");
  }
  Hash32 out{};
  std::size_t len = 0;
  if (EVP_MAC_final(ctx.get(), out.data(), &len, out.size()) != 1 ||
      len != out.size()) {
    Fail("hmac final");
  }
  return out;
}

Bytes Hkdf(ByteView ikm, ByteView salt, ByteView info, std::size_t length) {
  std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter> ctx(
      EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
  static const std::uint8_t kEmpty[1] = {0};
  auto ptr = [](ByteView v) { return v.empty() ? kEmpty : v.data(); };
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) <= 0 ||
      EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()) <= 0 ||
      EVP_PKEY_CTX_set1_hkdf_salt(ctx.get(), ptr(salt),
                                  static_cast<int>(salt.size())) <= 0 ||
      EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), ptr(ikm),
                                 static_cast<int>(ikm.size())) <= 0 ||
      EVP_PKEY_CTX_add1_hkdf_info(ctx.get(), ptr(info),
                                  static_cast<int>(info.size())) <= 0) {
    Fail("hkdf init");
  }
  Bytes out(length);
  std::size_t out_len = length;
  if (EVP_PKEY_derive(ctx.get(), out.data(), &out_len) <= 0 ||
      out_len != length) {
    Fail("hkdf derive");
  }
  return out;
}

Bytes Pbkdf2HmacSha256(ByteView password, ByteView salt,
                       std::uint32_t iterations, std::size_t length) {
  Bytes out(length);
  if (PKCS5_PBKDF2_HMAC(reinterpret_cast<const char*>(password.data()),
                        static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()),
                        static_cast<int>(iterations), EVP_sha256(),
                        static_cast<int>(length), out.data()) != 1) {
    Fail("pbkdf2");
  }
  return out;
}

Bytes AesCbcEncryptBlocks(ByteView key, ByteView iv, ByteView data) {
  return AesCbc(key, iv, data, true);
}

Bytes AesCbcDecryptBlocks(ByteView key, ByteView iv, ByteView data) {
  return AesCbc(key, iv, data, false);
}

Bytes Pkcs7Pad(ByteView data) {
  const std::size_t pad = kBlockSize - data.size() % kBlockSize;
  Bytes out(data.begin(), data.end());
  out.insert(out.end(), pad, static_cast<std::uint8_t>(pad));
  return out;
}

bool Pkcs7Unpad(Bytes& data) {
  if (data.empty() || data.size() % kBlockSize != 0) return false;
  const std::uint8_t pad = data.back();
  if (pad == 0 || pad > kBlockSize) return false;
  for (std::size_t i = data.size() - pad; i < data.size(); ++i) {
    if (data[i] != pad) return false;
  }
  data.resize(data.size() - pad);
  return true;
}

bool ConstantTimeEqual(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

void SecureWipe(std::span<std::uint8_t> data) {
  OPENSSL_cleanse(data.data(), data.size());
}

}  // namespace ledgerchat::crypto

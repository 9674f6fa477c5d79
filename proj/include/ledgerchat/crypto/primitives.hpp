#pragma once

// Thin wrappers over the symmetric primitives. The ratchet and sealing code
// is composed from these; the benchmark harness times them individually.

#include <cstdint>
#include <string_view>

#include "ledgerchat/bytes.hpp"

namespace ledgerchat::crypto {

inline constexpr std::size_t kBlockSize = 16;

Hash32 Sha256(ByteView data);
Hash32 HmacSha256(ByteView key, ByteView data);
// Two-part message without concatenating (used for MAC over ad || ct).
Hash32 HmacSha256(ByteView key, ByteView first, ByteView second);

// RFC 5869 extract-then-expand.
Bytes Hkdf(ByteView ikm, ByteView salt, ByteView info, std::size_t length);

// RFC 8018 PBKDF2 with HMAC-SHA256 as the PRF.
Bytes Pbkdf2HmacSha256(ByteView password, ByteView salt,
                       std::uint32_t iterations, std::size_t length);

// Raw CBC over whole blocks; no padding is added or removed.
Bytes AesCbcEncryptBlocks(ByteView key, ByteView iv, ByteView data);
Bytes AesCbcDecryptBlocks(ByteView key, ByteView iv, ByteView data);

Bytes Pkcs7Pad(ByteView data);
// Returns false on malformed padding, leaving `data` untouched.
bool Pkcs7Unpad(Bytes& data);

bool ConstantTimeEqual(ByteView a, ByteView b);
void SecureWipe(std::span<std::uint8_t> data);

}  // namespace ledgerchat::crypto

#include "ledgerchat/bytes.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "ledgerchat/serial.hpp"

namespace ledgerchat {

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string ToHex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw Error(ErrorCode::kFormat, "hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::kFormat, "invalid hex digit");
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::string Base64Encode(ByteView data) {
  std::string out(4 * ((data.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          data.data(), static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw Error(ErrorCode::kFormat, "base64 length is not a multiple of 4");
  }
  Bytes out(3 * text.size() / 4);
  int n = EVP_DecodeBlock(out.data(),
                          reinterpret_cast<const unsigned char*>(text.data()),
                          static_cast<int>(text.size()));
  if (n < 0) {
    throw Error(ErrorCode::kFormat, "invalid base64");
  }
  // EVP_DecodeBlock counts padding bytes as output; strip them.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

bool IsAllZero(ByteView data) {
  std::uint8_t acc = 0;
  for (std::uint8_t b : data) acc |= b;
  return acc == 0;
}

bool ContainsSubsequence(ByteView haystack, ByteView needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

// --- canonical encoding ----------------------------------------------------

CanonicalWriter& CanonicalWriter::Field(ByteView data) {
  PutU32BE(out_, static_cast<std::uint32_t>(data.size()));
  out_.insert(out_.end(), data.begin(), data.end());
  return *this;
}

CanonicalWriter& CanonicalWriter::U64(std::uint64_t value) {
  ByteArray<8> be{};
  for (int i = 7; i >= 0; --i) {
    be[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value & 0xff);
    value >>= 8;
  }
  return Field(be);
}

CanonicalWriter& CanonicalWriter::U8(std::uint8_t value) {
  const std::uint8_t one[1] = {value};
  return Field(ByteView(one));
}

ByteView CanonicalReader::Field() {
  if (data_.size() - pos_ < 4) {
    throw Error(ErrorCode::kFormat, "truncated field length");
  }
  std::uint32_t len = GetU32BE(data_, pos_);
  pos_ += 4;
  if (data_.size() - pos_ < len) {
    throw Error(ErrorCode::kFormat, "truncated field body");
  }
  ByteView f = data_.subspan(pos_, len);
  pos_ += len;
  return f;
}

std::string CanonicalReader::Text() { return AsString(Field()); }

std::uint64_t CanonicalReader::U64() {
  auto be = Fixed<8>();
  std::uint64_t v = 0;
  for (std::uint8_t b : be) v = (v << 8) | b;
  return v;
}

std::uint8_t CanonicalReader::U8() { return Fixed<1>()[0]; }

void CanonicalReader::ExpectEnd() const {
  if (!AtEnd()) {
    throw Error(ErrorCode::kFormat, "trailing bytes after canonical object");
  }
}

void PutU32BE(Bytes& out, std::uint32_t value) {
  out.push_back(static_cast<std::uint8_t>(value >> 24));
  out.push_back(static_cast<std::uint8_t>(value >> 16));
  out.push_back(static_cast<std::uint8_t>(value >> 8));
  out.push_back(static_cast<std::uint8_t>(value));
}

std::uint32_t GetU32BE(ByteView in, std::size_t offset) {
  return (static_cast<std::uint32_t>(in[offset]) << 24) |
         (static_cast<std::uint32_t>(in[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(in[offset + 2]) << 8) |
         static_cast<std::uint32_t>(in[offset + 3]);
}

// --- error categories -------------------------------------------------------

std::string_view Category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kArgument: return "argument";
    case ErrorCode::kEntropy: return "entropy";
    case ErrorCode::kKeyAgreement: return "key-agreement";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kAuthentication: return "decrypt-failed";
    case ErrorCode::kCorruption: return "decrypt-failed";
    case ErrorCode::kPermission: return "permission";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kRevocation: return "revocation";
    case ErrorCode::kEnrollment: return "enrollment";
    case ErrorCode::kRegistration: return "registration";
    case ErrorCode::kRouting: return "routing";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kReplay: return "replay";
    case ErrorCode::kResync: return "resync";
    case ErrorCode::kFingerprintMismatch: return "fingerprint-mismatch";
    case ErrorCode::kPeerRevoked: return "peer-revoked";
    case ErrorCode::kPeerExpired: return "peer-expired";
    case ErrorCode::kPeerNotFound: return "peer-not-found";
    case ErrorCode::kPeerChanged: return "peer-changed";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kStartup: return "startup";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

int ExitStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
    case ErrorCode::kArgument: return 2;
    case ErrorCode::kAuthentication:
    case ErrorCode::kCorruption: return 3;
    case ErrorCode::kPeerRevoked:
    case ErrorCode::kPeerExpired:
    case ErrorCode::kPeerNotFound:
    case ErrorCode::kPeerChanged: return 4;
    case ErrorCode::kReplay:
    case ErrorCode::kResync:
    case ErrorCode::kFingerprintMismatch: return 5;
    case ErrorCode::kPermission:
    case ErrorCode::kValidation:
    case ErrorCode::kRevocation:
    case ErrorCode::kEnrollment:
    case ErrorCode::kRegistration:
    case ErrorCode::kRouting: return 6;
    case ErrorCode::kStartup:
    case ErrorCode::kIo: return 7;
    default: return 1;
  }
}

}  // namespace ledgerchat

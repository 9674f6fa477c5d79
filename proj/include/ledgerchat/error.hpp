#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ledgerchat {

enum class ErrorCode {
  kArgument,
  kEntropy,
  kKeyAgreement,
  kSize,
  // MAC mismatch. Decryption was never attempted.
  kAuthentication,
  // MAC was valid but the padding was not. Callers outside crypto see this
  // folded into the same "decrypt-failed" category as kAuthentication.
  kCorruption,
  kPermission,
  kValidation,
  kRevocation,
  kEnrollment,
  kRegistration,
  kRouting,
  kProtocol,
  kUsage,
  kReplay,
  kResync,
  kFingerprintMismatch,
  kPeerRevoked,
  kPeerExpired,
  kPeerNotFound,
  kPeerChanged,
  kFormat,
  kStartup,
  kIo,
};

// Stable, machine-readable category name (used for CLI exit reporting).
std::string_view Category(ErrorCode code);

// Process exit status associated with a category; never 0.
int ExitStatus(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view category() const noexcept { return Category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace ledgerchat

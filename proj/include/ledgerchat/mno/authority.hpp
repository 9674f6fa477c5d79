#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "ledgerchat/clock.hpp"
#include "ledgerchat/crypto/crypto.hpp"
#include "ledgerchat/pki/chain.hpp"

namespace ledgerchat::mno {

using Challenge = ByteArray<32>;

inline constexpr std::int64_t kDefaultValiditySeconds = 365 * 24 * 3600;

// A subscriber's request to bind `subject_public_key` to `user_id`. The proof
// is an identity-key signature over PossessionMessage(), tying the request to
// a challenge the MNO handed out.
struct EnrollmentRequest {
  std::string user_id;
  Key32 subject_public_key{};
  Challenge challenge{};
  crypto::Signature proof_of_possession{};

  bool operator==(const EnrollmentRequest&) const = default;
};

Bytes PossessionMessage(std::string_view user_id, const Key32& public_key,
                        const Challenge& challenge);

EnrollmentRequest MakeEnrollmentRequest(std::string_view user_id,
                                        const crypto::IdentityKeyPair& identity,
                                        const Challenge& challenge,
                                        crypto::EntropySource& rng);

Bytes Serialize(const EnrollmentRequest& request);
EnrollmentRequest ParseEnrollmentRequest(ByteView bytes);

// Signature valid and fields consistent; revocations verify like any record.
bool VerifyCertificate(const pki::CertificateRecord& record,
                       const Key32& mno_verification_key);

// Stand-in for the operator's subscriber database.
using SubscriberCheck = std::function<bool(std::string_view user_id)>;

class CertificateAuthority {
 public:
  CertificateAuthority(pki::WriterCredential credential, pki::ChainNode& chain,
                       Clock clock,
                       crypto::EntropySource& rng = crypto::DefaultEntropy(),
                       SubscriberCheck subscriber_check = {});

  const std::string& id() const { return credential_.writer_id; }
  const Key32& verification_key() const {
    return credential_.key.public_key;
  }

  // Fresh nonce; replaces any outstanding challenge for the user.
  Challenge IssueChallenge(std::string_view user_id);

  // Consumes the user's outstanding challenge. Throws kEnrollment on a
  // missing/mismatched challenge, bad proof, or failed subscriber check.
  pki::CertificateRecord IssueCertificate(
      const EnrollmentRequest& request,
      std::int64_t validity_seconds = kDefaultValiditySeconds);

  void Revoke(std::string_view user_id);

  // Everything this authority holds apart from its signing key.
  Bytes SerializeState() const;

 private:
  pki::WriterCredential credential_;
  pki::ChainNode& chain_;
  Clock clock_;
  crypto::EntropySource& rng_;
  SubscriberCheck subscriber_check_;

  mutable std::mutex mu_;
  std::map<std::string, Challenge, std::less<>> pending_;
};

}  // namespace ledgerchat::mno

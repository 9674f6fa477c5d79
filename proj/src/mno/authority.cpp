#include "ledgerchat/mno/authority.hpp"

#include <chrono>

#include "ledgerchat/serial.hpp"

namespace ledgerchat {

Clock SystemClock() {
  return [] {
    return static_cast<std::int64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
  };
}

}  // namespace ledgerchat

namespace ledgerchat::mno {

Bytes PossessionMessage(std::string_view user_id, const Key32& public_key,
                        const Challenge& challenge) {
  CanonicalWriter w;
  w.Field(std::string_view("enroll")).Field(user_id).Field(public_key).Field(challenge);
  return std::move(w).bytes();
}

EnrollmentRequest MakeEnrollmentRequest(std::string_view user_id,
                                        const crypto::IdentityKeyPair& identity,
                                        const Challenge& challenge,
                                        crypto::EntropySource& rng) {
  EnrollmentRequest req;
  req.user_id = std::string(user_id);
  req.subject_public_key = identity.public_key;
  req.challenge = challenge;
  req.proof_of_possession = crypto::SignWithIdentity(
      identity.private_key,
      PossessionMessage(user_id, identity.public_key, challenge), rng);
  return req;
}

Bytes Serialize(const EnrollmentRequest& request) {
  CanonicalWriter w;
  w.Field(request.user_id)
      .Field(request.subject_public_key)
      .Field(request.challenge)
      .Field(request.proof_of_possession);
  return std::move(w).bytes();
}

EnrollmentRequest ParseEnrollmentRequest(ByteView bytes) {
  CanonicalReader r(bytes);
  EnrollmentRequest req;
  req.user_id = r.Text();
  req.subject_public_key = r.Fixed<32>();
  req.challenge = r.Fixed<32>();
  req.proof_of_possession = r.Fixed<64>();
  r.ExpectEnd();
  return req;
}

bool VerifyCertificate(const pki::CertificateRecord& record,
                       const Key32& mno_verification_key) {
  return pki::IsInternallyConsistent(record) &&
         crypto::Verify(mno_verification_key, pki::SignedPortion(record),
                        record.issuer_signature);
}

CertificateAuthority::CertificateAuthority(pki::WriterCredential credential,
                                           pki::ChainNode& chain, Clock clock,
                                           crypto::EntropySource& rng,
                                           SubscriberCheck subscriber_check)
    : credential_(std::move(credential)),
      chain_(chain),
      clock_(std::move(clock)),
      rng_(rng),
      subscriber_check_(std::move(subscriber_check)) {}

Challenge CertificateAuthority::IssueChallenge(std::string_view user_id) {
  Challenge c = rng_.Draw<32>();
  std::lock_guard lock(mu_);
  pending_.insert_or_assign(std::string(user_id), c);
  return c;
}

pki::CertificateRecord CertificateAuthority::IssueCertificate(
    const EnrollmentRequest& request, std::int64_t validity_seconds) {
  if (request.user_id.empty()) {
    throw Error(ErrorCode::kEnrollment, "empty user id");
  }
  if (validity_seconds <= 0) {
    throw Error(ErrorCode::kArgument, "validity must be positive");
  }
  {
    std::lock_guard lock(mu_);
    auto it = pending_.find(request.user_id);
    if (it == pending_.end() || it->second != request.challenge) {
      throw Error(ErrorCode::kEnrollment,
                  "no matching enrollment challenge for '" + request.user_id + "'");
    }
    // Single use, whatever the outcome below.
    pending_.erase(it);
  }
  if (!crypto::VerifyIdentitySignature(
          request.subject_public_key,
          PossessionMessage(request.user_id, request.subject_public_key,
                            request.challenge),
          request.proof_of_possession)) {
    throw Error(ErrorCode::kEnrollment,
                "proof of possession does not verify for '" + request.user_id + "'");
  }
  if (subscriber_check_ && !subscriber_check_(request.user_id)) {
    throw Error(ErrorCode::kEnrollment,
                "'" + request.user_id + "' is not a known subscriber");
  }

  const std::int64_t now = clock_();
  pki::CertificateRecord rec;
  rec.user_id = request.user_id;
  rec.subject_public_key = request.subject_public_key;
  rec.issued_at = now;
  rec.expires_at = now + validity_seconds;
  rec.kind = pki::RecordKind::kCertificate;
  rec = pki::SignRecord(std::move(rec), credential_);
  chain_.Append(credential_, {rec}, now);
  return rec;
}

void CertificateAuthority::Revoke(std::string_view user_id) {
  chain_.Revoke(credential_, user_id, clock_());
}

Bytes CertificateAuthority::SerializeState() const {
  std::lock_guard lock(mu_);
  CanonicalWriter w;
  w.Field(credential_.writer_id).Field(credential_.key.public_key);
  w.U64(pending_.size());
  for (const auto& [user, challenge] : pending_) {
    w.Field(user).Field(challenge);
  }
  return std::move(w).bytes();
}

}  // namespace ledgerchat::mno

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerchat/clock.hpp"
#include "ledgerchat/mno/authority.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/relay/relay.hpp"

namespace ledgerchat::client {

// Everything a client needs from the outside world. Implemented in-process
// (LocalNetwork), serverless (DirectNetwork) and over the socket protocol
// (wire::RemoteNetwork).
class Network {
 public:
  virtual ~Network() = default;

  virtual mno::Challenge RequestChallenge(std::string_view user_id) = 0;
  virtual pki::CertificateRecord Enroll(const mno::EnrollmentRequest& request) = 0;
  virtual void Register(std::string_view user_id, const Hash32& fingerprint) = 0;
  virtual pki::CertStatus FetchCertificate(std::string_view user_id) = 0;
  virtual relay::SubmitAck Submit(const relay::Envelope& envelope) = 0;
  virtual std::vector<relay::Delivery> Fetch(std::string_view user_id,
                                             std::uint64_t after_seq) = 0;
  virtual void CreateGroup(std::string_view group_id, std::string_view admin_id,
                           const std::vector<std::string>& member_ids) = 0;
  virtual std::vector<relay::MemberAck> SendGroup(const relay::Envelope& envelope) = 0;
  virtual std::int64_t Now() = 0;
};

// Same-process MNO + relay.
class LocalNetwork : public Network {
 public:
  LocalNetwork(mno::CertificateAuthority& authority, relay::Relay& relay,
               Clock clock)
      : authority_(authority), relay_(relay), clock_(std::move(clock)) {}

  mno::Challenge RequestChallenge(std::string_view user_id) override {
    return authority_.IssueChallenge(user_id);
  }
  pki::CertificateRecord Enroll(const mno::EnrollmentRequest& request) override {
    return authority_.IssueCertificate(request);
  }
  void Register(std::string_view user_id, const Hash32& fingerprint) override {
    relay_.RegisterUser(user_id, fingerprint);
  }
  pki::CertStatus FetchCertificate(std::string_view user_id) override {
    return relay_.FetchCertificate(user_id);
  }
  relay::SubmitAck Submit(const relay::Envelope& envelope) override {
    return relay_.SubmitEnvelope(envelope);
  }
  std::vector<relay::Delivery> Fetch(std::string_view user_id,
                                     std::uint64_t after_seq) override {
    return relay_.FetchEnvelopes(user_id, after_seq);
  }
  void CreateGroup(std::string_view group_id, std::string_view admin_id,
                   const std::vector<std::string>& member_ids) override {
    relay_.CreateGroup(group_id, admin_id, member_ids);
  }
  std::vector<relay::MemberAck> SendGroup(const relay::Envelope& envelope) override {
    return relay_.SendGroup(envelope);
  }
  std::int64_t Now() override { return clock_(); }

 private:
  mno::CertificateAuthority& authority_;
  relay::Relay& relay_;
  Clock clock_;
};

// Serverless variant: certificates come straight from a chain node and
// envelopes land directly in the peer's in-process inbox. No relay queues,
// no registration.
class PeerChannel {
 public:
  relay::SubmitAck Deliver(const std::string& recipient, const relay::Envelope& e);
  std::vector<relay::Delivery> Drain(std::string_view user_id, std::uint64_t after_seq);

 private:
  struct Inbox {
    std::uint64_t next_seq = 1;
    std::vector<relay::Delivery> items;
  };
  std::mutex mu_;
  std::map<std::string, Inbox, std::less<>> inboxes_;
};

class DirectNetwork final : public Network {
 public:
  DirectNetwork(mno::CertificateAuthority& authority, pki::ChainNode& chain,
                PeerChannel& channel, Clock clock)
      : authority_(authority), chain_(chain), channel_(channel), clock_(std::move(clock)) {}

  mno::Challenge RequestChallenge(std::string_view user_id) override {
    return authority_.IssueChallenge(user_id);
  }
  pki::CertificateRecord Enroll(const mno::EnrollmentRequest& request) override {
    return authority_.IssueCertificate(request);
  }
  void Register(std::string_view, const Hash32&) override {}
  pki::CertStatus FetchCertificate(std::string_view user_id) override {
    return pki::FetchLatest(chain_.Snapshot(), user_id, clock_());
  }
  relay::SubmitAck Submit(const relay::Envelope& envelope) override;
  std::vector<relay::Delivery> Fetch(std::string_view user_id,
                                     std::uint64_t after_seq) override {
    return channel_.Drain(user_id, after_seq);
  }
  void CreateGroup(std::string_view group_id, std::string_view admin_id,
                   const std::vector<std::string>& member_ids) override;
  std::vector<relay::MemberAck> SendGroup(const relay::Envelope& envelope) override;
  std::int64_t Now() override { return clock_(); }

 private:
  mno::CertificateAuthority& authority_;
  pki::ChainNode& chain_;
  PeerChannel& channel_;
  Clock clock_;
  std::map<std::string, std::vector<std::string>, std::less<>> groups_;
};

}  // namespace ledgerchat::client

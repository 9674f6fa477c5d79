#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerchat/clock.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/relay/envelope.hpp"

namespace ledgerchat::relay {

enum class AckStatus : std::uint8_t { kQueued = 0, kDelivered = 1 };

struct SubmitAck {
  AckStatus status = AckStatus::kQueued;
  std::uint64_t seq = 0;

  bool operator==(const SubmitAck&) const = default;
};

struct Delivery {
  std::uint64_t seq = 0;
  Envelope envelope;

  bool operator==(const Delivery&) const = default;
};

struct MemberAck {
  std::string member_id;
  std::optional<SubmitAck> ack;  // set when the copy was enqueued
  std::optional<ErrorCode> error;
  std::string detail;
};

struct RelayOptions {
  // 0 refreshes the chain snapshot before every certificate lookup.
  std::int64_t snapshot_refresh_seconds = 0;
};

// Store-and-forward IM server. Holds envelopes, registrations and group
// rosters; never any key material.
class Relay {
 public:
  using PushHandler = std::function<void(const Delivery&)>;

  Relay(pki::ChainNode& chain, Clock clock, RelayOptions options = {});

  // kRegistration unless the chain currently says Valid with this exact
  // fingerprint. Re-registering after a re-issue updates the fingerprint and
  // keeps the mailbox.
  void RegisterUser(std::string_view user_id, const Hash32& cert_fingerprint);
  bool IsRegistered(std::string_view user_id) const;

  pki::CertStatus FetchCertificate(std::string_view user_id);

  // kProtocol for malformed envelopes, kRouting for unregistered or
  // no-longer-valid parties.
  SubmitAck SubmitEnvelope(const Envelope& envelope);

  // Envelopes with seq > after_seq, oldest first. Everything at or below
  // after_seq counts as acknowledged and is dropped.
  std::vector<Delivery> FetchEnvelopes(std::string_view recipient_id,
                                       std::uint64_t after_seq);

  void CreateGroup(std::string_view group_id, std::string_view admin_id,
                   std::vector<std::string> member_ids);
  std::optional<std::vector<std::string>> GroupMembers(
      std::string_view group_id) const;

  // One copy per member other than the sender; failures are per member.
  // kPermission if the sender is not in `member_ids`.
  std::vector<MemberAck> BroadcastGroup(std::string_view group_id,
                                        const std::vector<std::string>& member_ids,
                                        const Envelope& envelope);
  // BroadcastGroup over the roster registered with CreateGroup.
  std::vector<MemberAck> SendGroup(const Envelope& envelope);

  // A connected recipient gets each new envelope pushed (and acked as
  // delivered); it stays in the mailbox until fetched past.
  void Connect(std::string_view user_id, PushHandler handler);
  void Disconnect(std::string_view user_id);

  void RefreshSnapshot();
  pki::ChainState snapshot();

  Bytes SerializeState() const;

 private:
  struct Mailbox {
    std::mutex mu;
    std::deque<std::pair<std::uint64_t, Bytes>> queue;
    std::uint64_t next_seq = 1;
    PushHandler push;
  };
  struct Registration {
    Hash32 fingerprint{};
    std::shared_ptr<Mailbox> mailbox;
  };
  struct Group {
    std::string admin_id;
    std::vector<std::string> members;
  };

  std::shared_ptr<Mailbox> MailboxFor(std::string_view user_id) const;
  bool CurrentlyValid(std::string_view user_id);
  SubmitAck Enqueue(Mailbox& box, const Envelope& envelope);

  pki::ChainNode& chain_;
  Clock clock_;
  RelayOptions options_;

  std::mutex snapshot_mu_;
  std::optional<pki::ChainState> snapshot_;
  std::int64_t snapshot_taken_at_ = 0;

  mutable std::shared_mutex users_mu_;
  std::map<std::string, Registration, std::less<>> users_;

  mutable std::shared_mutex groups_mu_;
  std::map<std::string, Group, std::less<>> groups_;
};

}  // namespace ledgerchat::relay

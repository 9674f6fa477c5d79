#include "ledgerchat/relay/relay.hpp"

#include <algorithm>
#include <mutex>

#include "ledgerchat/serial.hpp"

namespace ledgerchat::relay {

namespace {

void CheckWellFormed(const Envelope& e) {
  if (e.sender_id.empty()) {
    throw Error(ErrorCode::kProtocol, "envelope has no sender");
  }
  const auto& ct = e.payload.ciphertext;
  if (ct.empty() || ct.size() % 16 != 0) {
    throw Error(ErrorCode::kProtocol,
                "envelope ciphertext is not a positive multiple of 16 bytes");
  }
}

}  // namespace

Relay::Relay(pki::ChainNode& chain, Clock clock, RelayOptions options)
    : chain_(chain), clock_(std::move(clock)), options_(options) {}

// --- chain view ---------------------------------------------------------------

void Relay::RefreshSnapshot() {
  pki::ChainState fresh = chain_.Snapshot();
  std::lock_guard lock(snapshot_mu_);
  snapshot_ = std::move(fresh);
  snapshot_taken_at_ = clock_();
}

pki::ChainState Relay::snapshot() {
  {
    std::lock_guard lock(snapshot_mu_);
    const bool stale = !snapshot_ || options_.snapshot_refresh_seconds <= 0 ||
                       clock_() - snapshot_taken_at_ >=
                           options_.snapshot_refresh_seconds;
    if (!stale) return *snapshot_;
  }
  RefreshSnapshot();
  std::lock_guard lock(snapshot_mu_);
  return *snapshot_;
}

pki::CertStatus Relay::FetchCertificate(std::string_view user_id) {
  return pki::FetchLatest(snapshot(), user_id, clock_());
}

bool Relay::CurrentlyValid(std::string_view user_id) {
  return pki::IsValid(FetchCertificate(user_id));
}

// --- registration ---------------------------------------------------------------

void Relay::RegisterUser(std::string_view user_id, const Hash32& cert_fingerprint) {
  pki::CertStatus status = FetchCertificate(user_id);
  const auto* valid = std::get_if<pki::Valid>(&status);
  if (valid == nullptr) {
    throw Error(ErrorCode::kRegistration,
                "registration refused for '" + std::string(user_id) +
                    "': certificate " + std::string(pki::StatusName(status)));
  }
  if (pki::Fingerprint(valid->record) != cert_fingerprint) {
    throw Error(ErrorCode::kRegistration,
                "registration refused for '" + std::string(user_id) +
                    "': fingerprint does not match the current certificate");
  }
  std::unique_lock lock(users_mu_);
  auto it = users_.find(user_id);
  if (it == users_.end()) {
    users_.emplace(std::string(user_id),
                   Registration{cert_fingerprint, std::make_shared<Mailbox>()});
  } else {
    it->second.fingerprint = cert_fingerprint;
  }
}

bool Relay::IsRegistered(std::string_view user_id) const {
  std::shared_lock lock(users_mu_);
  return users_.find(user_id) != users_.end();
}

std::shared_ptr<Relay::Mailbox> Relay::MailboxFor(std::string_view user_id) const {
  std::shared_lock lock(users_mu_);
  auto it = users_.find(user_id);
  return it == users_.end() ? nullptr : it->second.mailbox;
}

// --- store and forward ------------------------------------------------------------

SubmitAck Relay::Enqueue(Mailbox& box, const Envelope& envelope) {
  PushHandler push;
  Delivery delivery;
  SubmitAck ack;
  {
    std::lock_guard lock(box.mu);
    ack.seq = box.next_seq++;
    box.queue.emplace_back(ack.seq, Serialize(envelope));
    push = box.push;
    if (push) {
      delivery = {ack.seq, ParseEnvelope(box.queue.back().second)};
    }
  }
  if (push) {
    push(delivery);
    ack.status = AckStatus::kDelivered;
  }
  return ack;
}

SubmitAck Relay::SubmitEnvelope(const Envelope& envelope) {
  CheckWellFormed(envelope);
  if (envelope.group_id) {
    throw Error(ErrorCode::kProtocol, "group envelopes go through group send");
  }
  if (envelope.recipient_id.empty() ||
      envelope.recipient_id == envelope.sender_id) {
    throw Error(ErrorCode::kProtocol, "envelope has no distinct recipient");
  }
  auto sender_box = MailboxFor(envelope.sender_id);
  auto box = MailboxFor(envelope.recipient_id);
  if (!sender_box || !box) {
    throw Error(ErrorCode::kRouting,
                "'" + (sender_box ? envelope.recipient_id : envelope.sender_id) +
                    "' is not registered");
  }
  for (const std::string* party : {&envelope.sender_id, &envelope.recipient_id}) {
    pki::CertStatus status = FetchCertificate(*party);
    if (!pki::IsValid(status)) {
      throw Error(ErrorCode::kRouting,
                  "'" + *party + "' certificate is " +
                      std::string(pki::StatusName(status)));
    }
  }
  return Enqueue(*box, envelope);
}

std::vector<Delivery> Relay::FetchEnvelopes(std::string_view recipient_id,
                                            std::uint64_t after_seq) {
  auto box = MailboxFor(recipient_id);
  if (!box) {
    throw Error(ErrorCode::kRouting,
                "'" + std::string(recipient_id) + "' is not registered");
  }
  std::lock_guard lock(box->mu);
  while (!box->queue.empty() && box->queue.front().first <= after_seq) {
    box->queue.pop_front();
  }
  std::vector<Delivery> out;
  out.reserve(box->queue.size());
  for (const auto& [seq, bytes] : box->queue) {
    out.push_back({seq, ParseEnvelope(bytes)});
  }
  return out;
}

void Relay::Connect(std::string_view user_id, PushHandler handler) {
  auto box = MailboxFor(user_id);
  if (!box) {
    throw Error(ErrorCode::kRouting,
                "'" + std::string(user_id) + "' is not registered");
  }
  std::lock_guard lock(box->mu);
  box->push = std::move(handler);
}

void Relay::Disconnect(std::string_view user_id) {
  if (auto box = MailboxFor(user_id)) {
    std::lock_guard lock(box->mu);
    box->push = nullptr;
  }
}

// --- groups -----------------------------------------------------------------------

void Relay::CreateGroup(std::string_view group_id, std::string_view admin_id,
                        std::vector<std::string> member_ids) {
  if (group_id.empty()) throw Error(ErrorCode::kProtocol, "empty group id");
  if (std::find(member_ids.begin(), member_ids.end(), admin_id) ==
      member_ids.end()) {
    member_ids.insert(member_ids.begin(), std::string(admin_id));
  }
  std::unique_lock lock(groups_mu_);
  auto it = groups_.find(group_id);
  if (it != groups_.end() && it->second.admin_id != admin_id) {
    throw Error(ErrorCode::kPermission,
                "group '" + std::string(group_id) + "' belongs to another admin");
  }
  groups_.insert_or_assign(std::string(group_id),
                           Group{std::string(admin_id), std::move(member_ids)});
}

std::optional<std::vector<std::string>> Relay::GroupMembers(
    std::string_view group_id) const {
  std::shared_lock lock(groups_mu_);
  auto it = groups_.find(group_id);
  if (it == groups_.end()) return std::nullopt;
  return it->second.members;
}

std::vector<MemberAck> Relay::BroadcastGroup(
    std::string_view group_id, const std::vector<std::string>& member_ids,
    const Envelope& envelope) {
  CheckWellFormed(envelope);
  if (!envelope.group_id || *envelope.group_id != group_id ||
      !envelope.recipient_id.empty()) {
    throw Error(ErrorCode::kProtocol, "envelope is not addressed to this group");
  }
  if (std::find(member_ids.begin(), member_ids.end(), envelope.sender_id) ==
      member_ids.end()) {
    throw Error(ErrorCode::kPermission,
                "'" + envelope.sender_id + "' is not a member of '" +
                    std::string(group_id) + "'");
  }
  if (!MailboxFor(envelope.sender_id) || !CurrentlyValid(envelope.sender_id)) {
    throw Error(ErrorCode::kRouting,
                "sender '" + envelope.sender_id + "' cannot send");
  }

  std::vector<MemberAck> acks;
  for (const auto& member : member_ids) {
    if (member == envelope.sender_id) continue;
    MemberAck ack;
    ack.member_id = member;
    auto box = MailboxFor(member);
    pki::CertStatus status = FetchCertificate(member);
    if (!box) {
      ack.error = ErrorCode::kRouting;
      ack.detail = "not registered";
    } else if (!pki::IsValid(status)) {
      ack.error = ErrorCode::kRouting;
      ack.detail = "certificate " + std::string(pki::StatusName(status));
    } else {
      ack.ack = Enqueue(*box, envelope);
    }
    acks.push_back(std::move(ack));
  }
  return acks;
}

std::vector<MemberAck> Relay::SendGroup(const Envelope& envelope) {
  if (!envelope.group_id) {
    throw Error(ErrorCode::kProtocol, "envelope has no group id");
  }
  auto members = GroupMembers(*envelope.group_id);
  if (!members) {
    throw Error(ErrorCode::kRouting, "unknown group '" + *envelope.group_id + "'");
  }
  return BroadcastGroup(*envelope.group_id, *members, envelope);
}

// --- inspection -------------------------------------------------------------------

Bytes Relay::SerializeState() const {
  CanonicalWriter w;
  {
    std::shared_lock lock(users_mu_);
    w.U64(users_.size());
    for (const auto& [user, reg] : users_) {
      w.Field(user).Field(reg.fingerprint);
      std::lock_guard box_lock(reg.mailbox->mu);
      w.U64(reg.mailbox->next_seq).U64(reg.mailbox->queue.size());
      for (const auto& [seq, bytes] : reg.mailbox->queue) {
        w.U64(seq).Field(bytes);
      }
    }
  }
  {
    std::shared_lock lock(groups_mu_);
    w.U64(groups_.size());
    for (const auto& [id, group] : groups_) {
      w.Field(id).Field(group.admin_id).U64(group.members.size());
      for (const auto& m : group.members) w.Field(m);
    }
  }
  return std::move(w).bytes();
}

}  // namespace ledgerchat::relay

#include "ledgerchat/client/network.hpp"

#include <algorithm>

namespace ledgerchat::client {

relay::SubmitAck PeerChannel::Deliver(const std::string& recipient,
                                      const relay::Envelope& e) {
  std::lock_guard lock(mu_);
  Inbox& inbox = inboxes_[recipient];
  relay::SubmitAck ack{relay::AckStatus::kDelivered, inbox.next_seq++};
  inbox.items.push_back({ack.seq, e});
  return ack;
}

std::vector<relay::Delivery> PeerChannel::Drain(std::string_view user_id,
                                                std::uint64_t after_seq) {
  std::lock_guard lock(mu_);
  auto it = inboxes_.find(user_id);
  if (it == inboxes_.end()) return {};
  auto& items = it->second.items;
  std::erase_if(items, [&](const relay::Delivery& d) { return d.seq <= after_seq; });
  return items;
}

relay::SubmitAck DirectNetwork::Submit(const relay::Envelope& envelope) {
  if (!pki::IsValid(FetchCertificate(envelope.recipient_id))) {
    throw Error(ErrorCode::kRouting,
                "'" + envelope.recipient_id + "' has no valid certificate");
  }
  return channel_.Deliver(envelope.recipient_id, envelope);
}

void DirectNetwork::CreateGroup(std::string_view group_id, std::string_view admin_id,
                                const std::vector<std::string>& member_ids) {
  std::vector<std::string> roster = member_ids;
  if (std::find(roster.begin(), roster.end(), admin_id) == roster.end()) {
    roster.insert(roster.begin(), std::string(admin_id));
  }
  groups_.insert_or_assign(std::string(group_id), std::move(roster));
}

std::vector<relay::MemberAck> DirectNetwork::SendGroup(const relay::Envelope& envelope) {
  if (!envelope.group_id) {
    throw Error(ErrorCode::kProtocol, "envelope has no group id");
  }
  auto it = groups_.find(*envelope.group_id);
  if (it == groups_.end()) {
    throw Error(ErrorCode::kRouting, "unknown group '" + *envelope.group_id + "'");
  }
  std::vector<relay::MemberAck> acks;
  for (const auto& member : it->second) {
    if (member == envelope.sender_id) continue;
    relay::MemberAck ack;
    ack.member_id = member;
    if (pki::IsValid(FetchCertificate(member))) {
      ack.ack = channel_.Deliver(member, envelope);
    } else {
      ack.error = ErrorCode::kRouting;
      ack.detail = "no valid certificate";
    }
    acks.push_back(std::move(ack));
  }
  return acks;
}

}  // namespace ledgerchat::client

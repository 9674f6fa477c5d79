#pragma once

// Line protocol between clients and the MNO / relay / chain-node roles. One
// message per line: the version character '1' followed by a compact JSON
// object {"type": ..., "body": ...}, where body is the base64 of the
// canonical encoding of the message record. docs/protocol.md has the layouts.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerchat/bytes.hpp"
#include "ledgerchat/mno/authority.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/relay/relay.hpp"

namespace ledgerchat::wire {

inline constexpr char kVersion = '1';
inline constexpr std::size_t kMaxLineBytes = 16u << 20;

enum class MessageType {
  kEnroll,
  kRegister,
  kFetchCert,
  kSubmit,
  kFetch,
  kGroupCreate,
  kGroupSend,
  kRevoke,
  kAck,
  kError,
};

std::string_view TypeName(MessageType type);
std::optional<MessageType> ParseTypeName(std::string_view name);

struct Message {
  MessageType type = MessageType::kAck;
  Bytes body;

  bool operator==(const Message&) const = default;
};

// Without the trailing newline.
std::string EncodeLine(const Message& message);
// kProtocol on a bad version, JSON, type or base64 body.
Message DecodeLine(std::string_view line);

// --- bodies ---------------------------------------------------------------------

enum class EnrollPhase : std::uint8_t { kChallenge = 0, kRequest = 1 };

Bytes EncodeChallengeRequest(std::string_view user_id);
Bytes EncodeEnrollRequest(const mno::EnrollmentRequest& request,
                          std::int64_t validity_seconds);

Bytes EncodeCertStatus(const pki::CertStatus& status);
pki::CertStatus DecodeCertStatus(ByteView body);

Bytes EncodeSubmitAck(const relay::SubmitAck& ack);
relay::SubmitAck DecodeSubmitAck(ByteView body);

Bytes EncodeDeliveries(const std::vector<relay::Delivery>& deliveries);
std::vector<relay::Delivery> DecodeDeliveries(ByteView body);

Bytes EncodeMemberAcks(const std::vector<relay::MemberAck>& acks);
std::vector<relay::MemberAck> DecodeMemberAcks(ByteView body);

Bytes EncodeError(const Error& error);
// Rebuilds the remote error with its original code.
Error DecodeError(ByteView body);

}  // namespace ledgerchat::wire

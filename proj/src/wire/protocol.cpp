#include "ledgerchat/wire/protocol.hpp"

#include <array>
#include <utility>

#include "json.hpp"
#include "ledgerchat/serial.hpp"

namespace ledgerchat::wire {

namespace {

constexpr std::array<std::pair<MessageType, std::string_view>, 10> kTypeNames{{
    {MessageType::kEnroll, "enroll"},
    {MessageType::kRegister, "register"},
    {MessageType::kFetchCert, "fetch_cert"},
    {MessageType::kSubmit, "submit"},
    {MessageType::kFetch, "fetch"},
    {MessageType::kGroupCreate, "group_create"},
    {MessageType::kGroupSend, "group_send"},
    {MessageType::kRevoke, "revoke"},
    {MessageType::kAck, "ack"},
    {MessageType::kError, "error"},
}};

constexpr int kLastErrorCode = static_cast<int>(ErrorCode::kIo);

}  // namespace

std::string_view TypeName(MessageType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "unknown";
}

std::optional<MessageType> ParseTypeName(std::string_view name) {
  for (const auto& [t, n] : kTypeNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

std::string EncodeLine(const Message& message) {
  nlohmann::json j{{"type", TypeName(message.type)},
                   {"body", Base64Encode(message.body)}};
  std::string out(1, kVersion);
  out += j.dump();
  return out;
}

Message DecodeLine(std::string_view line) {
  if (line.empty() || line.front() != kVersion) {
    throw Error(ErrorCode::kProtocol, "unsupported protocol version");
  }
  nlohmann::json j = nlohmann::json::parse(line.substr(1), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("type") ||
      !j.contains("body") || !j["type"].is_string() || !j["body"].is_string()) {
    throw Error(ErrorCode::kProtocol, "malformed message");
  }
  auto type = ParseTypeName(j["type"].get<std::string>());
  if (!type) {
    throw Error(ErrorCode::kProtocol,
                "unknown message type '" + j["type"].get<std::string>() + "'");
  }
  try {
    return {*type, Base64Decode(j["body"].get<std::string>())};
  } catch (const Error&) {
    throw Error(ErrorCode::kProtocol, "body is not valid base64");
  }
}

// --- bodies ---------------------------------------------------------------------

Bytes EncodeChallengeRequest(std::string_view user_id) {
  CanonicalWriter w;
  w.U8(static_cast<std::uint8_t>(EnrollPhase::kChallenge)).Field(user_id);
  return std::move(w).bytes();
}

Bytes EncodeEnrollRequest(const mno::EnrollmentRequest& request,
                          std::int64_t validity_seconds) {
  CanonicalWriter w;
  w.U8(static_cast<std::uint8_t>(EnrollPhase::kRequest))
      .Field(mno::Serialize(request))
      .I64(validity_seconds);
  return std::move(w).bytes();
}

Bytes EncodeCertStatus(const pki::CertStatus& status) {
  CanonicalWriter w;
  w.U8(static_cast<std::uint8_t>(status.index()));
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, pki::Valid> || std::is_same_v<T, pki::Expired>) {
          w.Field(pki::Serialize(s.record));
        } else if constexpr (std::is_same_v<T, pki::Revoked>) {
          w.Field(pki::Serialize(s.revocation));
        }
      },
      status);
  return std::move(w).bytes();
}

pki::CertStatus DecodeCertStatus(ByteView body) {
  CanonicalReader r(body);
  pki::CertStatus out;
  switch (r.U8()) {
    case 0:
      out = pki::Valid{pki::ParseCertificateRecord(r.Field())};
      break;
    case 1:
      out = pki::Revoked{pki::ParseCertificateRecord(r.Field())};
      break;
    case 2:
      out = pki::NotFound{};
      break;
    case 3:
      out = pki::Expired{pki::ParseCertificateRecord(r.Field())};
      break;
    default:
      throw Error(ErrorCode::kProtocol, "unknown certificate status tag");
  }
  r.ExpectEnd();
  return out;
}

Bytes EncodeSubmitAck(const relay::SubmitAck& ack) {
  CanonicalWriter w;
  w.U8(static_cast<std::uint8_t>(ack.status)).U64(ack.seq);
  return std::move(w).bytes();
}

relay::SubmitAck DecodeSubmitAck(ByteView body) {
  CanonicalReader r(body);
  relay::SubmitAck ack;
  std::uint8_t status = r.U8();
  if (status > 1) throw Error(ErrorCode::kProtocol, "unknown ack status");
  ack.status = static_cast<relay::AckStatus>(status);
  ack.seq = r.U64();
  r.ExpectEnd();
  return ack;
}

Bytes EncodeDeliveries(const std::vector<relay::Delivery>& deliveries) {
  CanonicalWriter w;
  w.U64(deliveries.size());
  for (const auto& d : deliveries) w.U64(d.seq).Field(relay::Serialize(d.envelope));
  return std::move(w).bytes();
}

std::vector<relay::Delivery> DecodeDeliveries(ByteView body) {
  CanonicalReader r(body);
  std::vector<relay::Delivery> out;
  for (std::uint64_t n = r.U64(); n > 0; --n) {
    relay::Delivery d;
    d.seq = r.U64();
    d.envelope = relay::ParseEnvelope(r.Field());
    out.push_back(std::move(d));
  }
  r.ExpectEnd();
  return out;
}

Bytes EncodeMemberAcks(const std::vector<relay::MemberAck>& acks) {
  CanonicalWriter w;
  w.U64(acks.size());
  for (const auto& a : acks) {
    w.Field(a.member_id);
    w.U8(a.ack ? 1 : 0);
    if (a.ack) w.Field(EncodeSubmitAck(*a.ack));
    w.U8(a.error ? 1 : 0);
    if (a.error) w.U8(static_cast<std::uint8_t>(*a.error));
    w.Field(a.detail);
  }
  return std::move(w).bytes();
}

std::vector<relay::MemberAck> DecodeMemberAcks(ByteView body) {
  CanonicalReader r(body);
  std::vector<relay::MemberAck> out;
  for (std::uint64_t n = r.U64(); n > 0; --n) {
    relay::MemberAck a;
    a.member_id = r.Text();
    if (r.U8()) a.ack = DecodeSubmitAck(r.Field());
    if (r.U8()) {
      std::uint8_t code = r.U8();
      if (code > kLastErrorCode) throw Error(ErrorCode::kProtocol, "unknown error code");
      a.error = static_cast<ErrorCode>(code);
    }
    a.detail = r.Text();
    out.push_back(std::move(a));
  }
  r.ExpectEnd();
  return out;
}

Bytes EncodeError(const Error& error) {
  CanonicalWriter w;
  w.U8(static_cast<std::uint8_t>(error.code()))
      .Field(error.category())
      .Field(std::string_view(error.what()));
  return std::move(w).bytes();
}

Error DecodeError(ByteView body) {
  CanonicalReader r(body);
  std::uint8_t code = r.U8();
  r.Text();  // category, for non-C++ readers
  std::string message = r.Text();
  r.ExpectEnd();
  if (code > kLastErrorCode) {
    return Error(ErrorCode::kProtocol, "remote error with unknown code: " + message);
  }
  return Error(static_cast<ErrorCode>(code), message);
}

}  // namespace ledgerchat::wire

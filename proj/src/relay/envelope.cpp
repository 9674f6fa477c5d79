#include "ledgerchat/relay/envelope.hpp"

#include "ledgerchat/serial.hpp"

namespace ledgerchat::relay {

namespace {

void WriteHeader(CanonicalWriter& w, const Envelope& e) {
  w.Field(e.sender_id)
      .Field(e.recipient_id)
      .U64(e.counter)
      .Field(e.sender_cert_fingerprint)
      .U8(e.group_id ? 1 : 0)
      .Field(e.group_id ? std::string_view(*e.group_id) : std::string_view())
      .I64(e.sent_at);
}

}  // namespace

Bytes HeaderBytes(const Envelope& envelope) {
  CanonicalWriter w;
  WriteHeader(w, envelope);
  return std::move(w).bytes();
}

Bytes Serialize(const Envelope& envelope) {
  CanonicalWriter w;
  WriteHeader(w, envelope);
  w.Field(envelope.payload.ciphertext).Field(envelope.payload.mac);
  return std::move(w).bytes();
}

Envelope ParseEnvelope(ByteView bytes) {
  CanonicalReader r(bytes);
  Envelope e;
  e.sender_id = r.Text();
  e.recipient_id = r.Text();
  e.counter = r.U64();
  e.sender_cert_fingerprint = r.Fixed<32>();
  const std::uint8_t has_group = r.U8();
  std::string group = r.Text();
  if (has_group > 1 || (!has_group && !group.empty())) {
    throw Error(ErrorCode::kFormat, "bad group flag in envelope");
  }
  if (has_group) e.group_id = std::move(group);
  e.sent_at = r.I64();
  ByteView ct = r.Field();
  e.payload.ciphertext.assign(ct.begin(), ct.end());
  e.payload.mac = r.Fixed<32>();
  r.ExpectEnd();
  return e;
}

}  // namespace ledgerchat::relay

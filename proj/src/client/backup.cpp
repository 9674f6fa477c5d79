#include <limits>

#include "ledgerchat/client/session.hpp"
#include "ledgerchat/crypto/primitives.hpp"
#include "ledgerchat/serial.hpp"

namespace ledgerchat::client {

namespace {

constexpr std::size_t kHeaderSize = kBackupMagic.size() + crypto::kSaltSize + 4;

void WriteChain(CanonicalWriter& w, const crypto::ChainKey& ck) {
  w.Field(ck.key).U64(ck.index).U8(static_cast<std::uint8_t>(ck.direction));
}

crypto::ChainKey ReadChain(CanonicalReader& r) {
  crypto::ChainKey ck;
  ck.key = r.Fixed<32>();
  ck.index = r.U64();
  std::uint8_t dir = r.U8();
  if (dir > 1) throw Error(ErrorCode::kFormat, "bad chain direction");
  ck.direction = static_cast<crypto::Direction>(dir);
  return ck;
}

void WriteSkipped(CanonicalWriter& w, const SkippedKeys& skipped) {
  w.U64(skipped.size());
  for (const auto& [counter, mk] : skipped) {
    w.U64(counter).Field(mk.cipher_key).Field(mk.mac_key).Field(mk.iv).U64(mk.index);
  }
}

SkippedKeys ReadSkipped(CanonicalReader& r) {
  SkippedKeys out;
  const std::uint64_t n = r.U64();
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t counter = r.U64();
    crypto::MessageKey mk;
    mk.cipher_key = r.Fixed<32>();
    mk.mac_key = r.Fixed<32>();
    mk.iv = r.Fixed<16>();
    mk.index = r.U64();
    out.emplace(counter, mk);
  }
  return out;
}

Bytes HeaderBytes(const crypto::Salt& salt, std::uint32_t iterations) {
  Bytes out(kBackupMagic.begin(), kBackupMagic.end());
  out.insert(out.end(), salt.begin(), salt.end());
  PutU32BE(out, iterations);
  return out;
}

}  // namespace

Bytes SerializeForBackup(const ClientState& state) {
  CanonicalWriter w;
  w.Field(state.user_id)
      .Field(state.identity.private_key)
      .Field(state.identity.public_key)
      .Field(pki::Serialize(state.certificate));

  w.U64(state.sessions.size());
  for (const auto& [peer, s] : state.sessions) {
    w.Field(peer).Field(s.peer_id).Field(s.master.bytes);
    WriteChain(w, s.send_chain);
    WriteChain(w, s.recv_chain);
    WriteSkipped(w, s.skipped_keys);
    w.Field(s.peer_cert_fingerprint);
  }

  w.U64(state.groups.size());
  for (const auto& [id, g] : state.groups) {
    w.Field(id).Field(g.group_id).Field(g.admin_id).U64(g.member_ids.size());
    for (const auto& m : g.member_ids) w.Field(m);
    w.Field(g.group_key);
    WriteChain(w, g.group_chain);
    WriteSkipped(w, g.skipped_keys);
  }

  w.U64(state.history.size());
  for (const auto& h : state.history) {
    w.U8(static_cast<std::uint8_t>(h.direction))
        .Field(h.peer_id)
        .Field(h.group_id)
        .U64(h.counter)
        .Field(h.text)
        .I64(h.timestamp);
  }
  w.U64(state.mailbox_cursor);
  return std::move(w).bytes();
}

ClientState ParseBackupPayload(ByteView bytes) {
  CanonicalReader r(bytes);
  ClientState st;
  st.user_id = r.Text();
  st.identity.private_key = r.Fixed<32>();
  st.identity.public_key = r.Fixed<32>();
  st.certificate = pki::ParseCertificateRecord(r.Field());

  for (std::uint64_t n = r.U64(); n > 0; --n) {
    std::string key = r.Text();
    SessionState s;
    s.peer_id = r.Text();
    s.master.bytes = r.Fixed<32>();
    s.send_chain = ReadChain(r);
    s.recv_chain = ReadChain(r);
    s.skipped_keys = ReadSkipped(r);
    s.peer_cert_fingerprint = r.Fixed<32>();
    st.sessions.emplace(std::move(key), std::move(s));
  }

  for (std::uint64_t n = r.U64(); n > 0; --n) {
    std::string key = r.Text();
    GroupState g;
    g.group_id = r.Text();
    g.admin_id = r.Text();
    for (std::uint64_t m = r.U64(); m > 0; --m) g.member_ids.push_back(r.Text());
    g.group_key = r.Fixed<32>();
    g.group_chain = ReadChain(r);
    g.skipped_keys = ReadSkipped(r);
    st.groups.emplace(std::move(key), std::move(g));
  }

  for (std::uint64_t n = r.U64(); n > 0; --n) {
    HistoryEntry h;
    std::uint8_t dir = r.U8();
    if (dir > 1) throw Error(ErrorCode::kFormat, "bad history direction");
    h.direction = static_cast<HistoryDirection>(dir);
    h.peer_id = r.Text();
    h.group_id = r.Text();
    h.counter = r.U64();
    h.text = r.Text();
    h.timestamp = r.I64();
    st.history.push_back(std::move(h));
  }
  st.mailbox_cursor = r.U64();
  r.ExpectEnd();
  return st;
}

Bytes Serialize(const BackupArchive& archive) {
  Bytes out = HeaderBytes(archive.salt, archive.iterations);
  PutU32BE(out, static_cast<std::uint32_t>(archive.payload.ciphertext.size()));
  out.insert(out.end(), archive.payload.ciphertext.begin(),
             archive.payload.ciphertext.end());
  out.insert(out.end(), archive.payload.mac.begin(), archive.payload.mac.end());
  return out;
}

BackupArchive ParseBackupArchive(ByteView bytes) {
  if (bytes.size() < kHeaderSize + 4 + crypto::kMacSize) {
    throw Error(ErrorCode::kFormat, "backup archive is truncated");
  }
  if (!std::equal(kBackupMagic.begin(), kBackupMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kFormat, "not a backup archive (bad magic)");
  }
  BackupArchive a;
  std::size_t pos = kBackupMagic.size();
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), crypto::kSaltSize,
              a.salt.begin());
  pos += crypto::kSaltSize;
  a.iterations = GetU32BE(bytes, pos);
  pos += 4;
  const std::uint32_t ct_len = GetU32BE(bytes, pos);
  pos += 4;
  if (bytes.size() - pos != static_cast<std::size_t>(ct_len) + crypto::kMacSize) {
    throw Error(ErrorCode::kFormat, "backup archive length mismatch");
  }
  auto ct = bytes.subspan(pos, ct_len);
  a.payload.ciphertext.assign(ct.begin(), ct.end());
  pos += ct_len;
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), crypto::kMacSize,
              a.payload.mac.begin());
  return a;
}

BackupArchive ExportBackup(const ClientState& state, std::string_view secret,
                           std::uint32_t iterations, crypto::EntropySource& rng) {
  if (secret.empty()) {
    throw Error(ErrorCode::kArgument, "backup secret must not be empty");
  }
  BackupArchive a;
  a.salt = rng.Draw<crypto::kSaltSize>();
  a.iterations = iterations;
  crypto::BackupKey key =
      crypto::DeriveBackupKey(secret, a.salt, iterations);
  crypto::MessageKey mk = crypto::ExpandMessageKey(key.key, "backup");
  Bytes plain = SerializeForBackup(state);
  a.payload = crypto::Seal(mk, plain, HeaderBytes(a.salt, a.iterations),
                           std::numeric_limits<std::size_t>::max());
  crypto::SecureWipe(plain);
  crypto::SecureWipe(key.key);
  crypto::SecureWipe(mk.cipher_key);
  crypto::SecureWipe(mk.mac_key);
  return a;
}

ClientState RestoreBackup(const BackupArchive& archive, std::string_view secret,
                          crypto::KdfPolicy policy) {
  crypto::BackupKey key =
      crypto::DeriveBackupKey(secret, archive.salt, archive.iterations, policy);
  crypto::MessageKey mk = crypto::ExpandMessageKey(key.key, "backup");
  Bytes plain = crypto::Unseal(mk, archive.payload,
                               HeaderBytes(archive.salt, archive.iterations));
  ClientState st = ParseBackupPayload(plain);
  crypto::SecureWipe(plain);
  crypto::SecureWipe(key.key);
  return st;
}

}  // namespace ledgerchat::client

#include "ledgerchat/client/session.hpp"

#include <algorithm>

#include "ledgerchat/crypto/primitives.hpp"
#include "ledgerchat/serial.hpp"

namespace ledgerchat::client {

namespace {

constexpr Key32 kZeroSalt{};

void Wipe(crypto::MessageKey& mk) {
  crypto::SecureWipe(mk.cipher_key);
  crypto::SecureWipe(mk.mac_key);
  crypto::SecureWipe(mk.iv);
}

Bytes Frame(MessageKind kind, ByteView body) {
  Bytes out;
  out.reserve(body.size() + 1);
  out.push_back(static_cast<std::uint8_t>(kind));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

crypto::ChainKey GroupChainFromKey(const Key32& group_key,
                                   std::string_view group_id) {
  Bytes okm = crypto::Hkdf(group_key, kZeroSalt,
                           AsBytes("group|" + std::string(group_id)), 32);
  crypto::ChainKey ck;
  std::copy(okm.begin(), okm.end(), ck.key.begin());
  crypto::SecureWipe(okm);
  return ck;
}

Bytes EncodeGroupKey(const GroupState& g) {
  CanonicalWriter w;
  w.Field(g.group_id).Field(g.admin_id).U64(g.member_ids.size());
  for (const auto& m : g.member_ids) w.Field(m);
  w.Field(g.group_key);
  return std::move(w).bytes();
}

// Opens `payload` at `counter` against a receive chain, keeping keys for any
// skipped counters. Nothing is committed unless the MAC verifies.
Bytes OpenWithChain(crypto::ChainKey& chain, SkippedKeys& skipped,
                    std::uint64_t counter, const crypto::SealedPayload& payload,
                    ByteView ad, std::size_t max_skip) {
  if (counter < chain.index) {
    auto it = skipped.find(counter);
    if (it == skipped.end()) {
      throw Error(ErrorCode::kReplay,
                  "counter " + std::to_string(counter) + " was already consumed");
    }
    Bytes plain = crypto::Unseal(it->second, payload, ad);
    Wipe(it->second);
    skipped.erase(it);
    return plain;
  }
  if (counter - chain.index > max_skip) {
    throw Error(ErrorCode::kResync,
                "counter " + std::to_string(counter) + " is " +
                    std::to_string(counter - chain.index) +
                    " ahead of the chain (limit " + std::to_string(max_skip) + ")");
  }
  crypto::ChainKey ck = chain;
  SkippedKeys fresh;
  while (ck.index < counter) {
    crypto::RatchetStep s = crypto::RatchetForward(ck);
    fresh.emplace(ck.index, s.message_key);
    ck = s.next;
  }
  crypto::RatchetStep step = crypto::RatchetForward(ck);
  Bytes plain;
  try {
    plain = crypto::Unseal(step.message_key, payload, ad);
  } catch (...) {
    Wipe(step.message_key);
    for (auto& [c, mk] : fresh) Wipe(mk);
    throw;
  }
  Wipe(step.message_key);
  chain = step.next;
  skipped.merge(fresh);
  while (skipped.size() > max_skip) {
    Wipe(skipped.begin()->second);
    skipped.erase(skipped.begin());
  }
  return plain;
}

}  // namespace

ErrorCode RefusalCode(const pki::CertStatus& status) {
  if (std::holds_alternative<pki::Revoked>(status)) return ErrorCode::kPeerRevoked;
  if (std::holds_alternative<pki::Expired>(status)) return ErrorCode::kPeerExpired;
  return ErrorCode::kPeerNotFound;
}

Client::Client(ClientState state, Network& network, ClientOptions options,
               crypto::EntropySource& rng)
    : state_(std::move(state)), network_(network), options_(options), rng_(rng) {}

Client Client::Enroll(std::string user_id, Network& network,
                      ClientOptions options, crypto::EntropySource& rng) {
  ClientState st;
  st.user_id = std::move(user_id);
  st.identity = crypto::GenerateIdentityKeyPair(rng);
  try {
    mno::Challenge challenge = network.RequestChallenge(st.user_id);
    st.certificate = network.Enroll(
        mno::MakeEnrollmentRequest(st.user_id, st.identity, challenge, rng));
  } catch (const Error& e) {
    throw Error(e.code(), "install failed at enrollment: " + std::string(e.what()));
  }
  return Client(std::move(st), network, options, rng);
}

void Client::Register() {
  try {
    network_.Register(state_.user_id, pki::Fingerprint(state_.certificate));
  } catch (const Error& e) {
    throw Error(e.code(), "install failed at registration: " + std::string(e.what()));
  }
}

Client Client::Install(std::string user_id, Network& network,
                       ClientOptions options, crypto::EntropySource& rng) {
  Client c = Enroll(std::move(user_id), network, options, rng);
  c.Register();
  return c;
}

// --- sessions ---------------------------------------------------------------------

void Client::StartSession(std::string_view peer_id) {
  pki::CertStatus status = network_.FetchCertificate(peer_id);
  const auto* valid = std::get_if<pki::Valid>(&status);
  if (valid == nullptr) {
    throw Error(RefusalCode(status), "session with '" + std::string(peer_id) +
                                         "' refused: certificate " +
                                         std::string(pki::StatusName(status)));
  }
  SessionState s;
  s.peer_id = std::string(peer_id);
  s.master = crypto::DeriveMasterSecret(state_.identity.private_key,
                                        valid->record.subject_public_key);
  crypto::ChainPair chains = crypto::InitChains(s.master, state_.user_id, peer_id);
  s.send_chain = chains.send;
  s.recv_chain = chains.receive;
  s.peer_cert_fingerprint = pki::Fingerprint(valid->record);
  state_.sessions.insert_or_assign(s.peer_id, std::move(s));
}

bool Client::HasSession(std::string_view peer_id) const {
  return state_.sessions.find(std::string(peer_id)) != state_.sessions.end();
}

SessionState& Client::SessionFor(std::string_view peer_id) {
  auto it = state_.sessions.find(std::string(peer_id));
  if (it == state_.sessions.end()) {
    throw Error(ErrorCode::kUsage,
                "no session with '" + std::string(peer_id) + "'");
  }
  return it->second;
}

void Client::CheckPeerStillValid(const SessionState& session) {
  pki::CertStatus status = network_.FetchCertificate(session.peer_id);
  const auto* valid = std::get_if<pki::Valid>(&status);
  if (valid == nullptr) {
    throw Error(RefusalCode(status), "'" + session.peer_id + "' certificate is " +
                                         std::string(pki::StatusName(status)));
  }
  if (pki::Fingerprint(valid->record) != session.peer_cert_fingerprint) {
    throw Error(ErrorCode::kPeerChanged,
                "'" + session.peer_id +
                    "' holds a different certificate; restart the session");
  }
}

relay::Envelope Client::ComposeContent(std::string_view peer_id,
                                       MessageKind kind, ByteView body) {
  SessionState& session = SessionFor(peer_id);
  CheckPeerStillValid(session);

  crypto::RatchetStep step = crypto::RatchetForward(session.send_chain);
  relay::Envelope env;
  env.sender_id = state_.user_id;
  env.recipient_id = session.peer_id;
  env.counter = step.message_key.index;
  env.sender_cert_fingerprint = pki::Fingerprint(state_.certificate);
  env.sent_at = network_.Now();
  Bytes plain = Frame(kind, body);
  env.payload = crypto::Seal(step.message_key, plain, relay::HeaderBytes(env));
  crypto::SecureWipe(plain);
  Wipe(step.message_key);
  session.send_chain = step.next;
  return env;
}

relay::Envelope Client::ComposeText(std::string_view peer_id,
                                    std::string_view text) {
  relay::Envelope env = ComposeContent(peer_id, MessageKind::kText, AsBytes(text));
  state_.history.push_back({HistoryDirection::kOutgoing, env.recipient_id, "",
                            env.counter, std::string(text), env.sent_at});
  return env;
}

relay::Envelope Client::SendText(std::string_view peer_id, std::string_view text) {
  relay::Envelope env = ComposeText(peer_id, text);
  network_.Submit(env);
  return env;
}

// --- receive ----------------------------------------------------------------------

ReceivedMessage Client::ReceiveEnvelope(const relay::Envelope& envelope) {
  return envelope.group_id ? ReceiveGroup(envelope) : ReceiveDirect(envelope);
}

ReceivedMessage Client::ReceiveDirect(const relay::Envelope& envelope) {
  if (envelope.recipient_id != state_.user_id) {
    throw Error(ErrorCode::kProtocol, "envelope is addressed to '" +
                                          envelope.recipient_id + "'");
  }
  SessionState& session = SessionFor(envelope.sender_id);
  if (envelope.sender_cert_fingerprint != session.peer_cert_fingerprint) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "envelope from '" + envelope.sender_id +
                    "' carries a certificate fingerprint other than the pinned one");
  }

  // Work on copies so a failure at any later step leaves the session as it was.
  crypto::ChainKey chain = session.recv_chain;
  SkippedKeys skipped = session.skipped_keys;
  Bytes plain = OpenWithChain(chain, skipped, envelope.counter, envelope.payload,
                              relay::HeaderBytes(envelope), options_.max_skip);
  if (plain.empty()) {
    throw Error(ErrorCode::kProtocol, "empty message frame");
  }
  ReceivedMessage msg;
  msg.sender_id = envelope.sender_id;
  msg.counter = envelope.counter;
  ByteView body = ByteView(plain).subspan(1);
  switch (static_cast<MessageKind>(plain.front())) {
    case MessageKind::kText:
      msg.kind = MessageKind::kText;
      msg.text = AsString(body);
      break;
    case MessageKind::kGroupKey:
      msg.kind = MessageKind::kGroupKey;
      ApplyGroupKey(envelope.sender_id, body);
      {
        CanonicalReader r(body);
        msg.group_id = r.Text();
      }
      break;
    default:
      throw Error(ErrorCode::kProtocol, "unknown message kind");
  }
  session.recv_chain = chain;
  session.skipped_keys = std::move(skipped);
  crypto::SecureWipe(plain);
  if (msg.kind == MessageKind::kText) {
    state_.history.push_back({HistoryDirection::kIncoming, msg.sender_id, "",
                              msg.counter, msg.text, envelope.sent_at});
  }
  return msg;
}

std::vector<PollItem> Client::Poll() {
  std::vector<relay::Delivery> deliveries =
      network_.Fetch(state_.user_id, state_.mailbox_cursor);
  std::vector<PollItem> items;
  for (auto& d : deliveries) {
    PollItem item;
    item.seq = d.seq;
    item.envelope = d.envelope;
    const relay::Envelope& env = item.envelope;
    try {
      if (!env.group_id && !HasSession(env.sender_id)) {
        StartSession(env.sender_id);
      }
      try {
        item.message = ReceiveEnvelope(env);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kFingerprintMismatch || env.group_id) throw;
        // The sender may have re-keyed since the session was pinned.
        pki::CertStatus status = network_.FetchCertificate(env.sender_id);
        const auto* valid = std::get_if<pki::Valid>(&status);
        if (valid == nullptr ||
            pki::Fingerprint(valid->record) != env.sender_cert_fingerprint) {
          throw;
        }
        StartSession(env.sender_id);
        item.message = ReceiveEnvelope(env);
      }
    } catch (const Error& e) {
      item.error = e.code();
      item.detail = e.what();
    }
    state_.mailbox_cursor = std::max(state_.mailbox_cursor, d.seq);
    items.push_back(std::move(item));
  }
  return items;
}

// --- groups -----------------------------------------------------------------------

GroupCreation Client::CreateGroup(std::string_view group_id,
                                  const std::vector<std::string>& member_ids) {
  if (group_id.empty()) throw Error(ErrorCode::kArgument, "empty group id");
  GroupCreation result;

  GroupState g;
  g.group_id = std::string(group_id);
  g.admin_id = state_.user_id;
  g.member_ids.push_back(state_.user_id);
  for (const auto& member : member_ids) {
    if (member == state_.user_id ||
        std::find(g.member_ids.begin(), g.member_ids.end(), member) !=
            g.member_ids.end()) {
      continue;
    }
    try {
      if (HasSession(member)) {
        CheckPeerStillValid(SessionFor(member));
      } else {
        StartSession(member);
      }
      g.member_ids.push_back(member);
    } catch (const Error& e) {
      result.excluded.emplace(member, e.what());
    }
  }
  g.group_key = rng_.Draw<32>();
  g.group_chain = GroupChainFromKey(g.group_key, g.group_id);

  network_.CreateGroup(g.group_id, g.admin_id, g.member_ids);

  const Bytes distribution = EncodeGroupKey(g);
  for (const auto& member : g.member_ids) {
    if (member == state_.user_id) continue;
    relay::Envelope env = ComposeContent(member, MessageKind::kGroupKey, distribution);
    try {
      network_.Submit(env);
    } catch (const Error& e) {
      result.excluded.emplace(member, std::string("delivery failed: ") + e.what());
    }
    result.distributions.push_back(std::move(env));
  }
  state_.groups.insert_or_assign(g.group_id, std::move(g));
  return result;
}

void Client::ApplyGroupKey(const std::string& sender, ByteView body) {
  CanonicalReader r(body);
  GroupState g;
  g.group_id = r.Text();
  g.admin_id = r.Text();
  for (std::uint64_t n = r.U64(); n > 0; --n) g.member_ids.push_back(r.Text());
  g.group_key = r.Fixed<32>();
  r.ExpectEnd();

  if (g.admin_id != sender) {
    throw Error(ErrorCode::kPermission, "group key for '" + g.group_id +
                                            "' was not sent by its admin");
  }
  if (std::find(g.member_ids.begin(), g.member_ids.end(), state_.user_id) ==
      g.member_ids.end()) {
    throw Error(ErrorCode::kProtocol, "group key for a group we are not in");
  }
  auto existing = state_.groups.find(g.group_id);
  if (existing != state_.groups.end() && existing->second.admin_id != g.admin_id) {
    throw Error(ErrorCode::kPermission,
                "group '" + g.group_id + "' already has a different admin");
  }
  g.group_chain = GroupChainFromKey(g.group_key, g.group_id);
  state_.groups.insert_or_assign(g.group_id, std::move(g));
}

relay::Envelope Client::ComposeGroupMessage(std::string_view group_id,
                                            std::string_view text) {
  auto it = state_.groups.find(std::string(group_id));
  if (it == state_.groups.end()) {
    throw Error(ErrorCode::kUsage,
                "not a member of group '" + std::string(group_id) + "'");
  }
  GroupState& g = it->second;
  crypto::RatchetStep step = crypto::RatchetForward(g.group_chain);
  relay::Envelope env;
  env.sender_id = state_.user_id;
  env.counter = step.message_key.index;
  env.sender_cert_fingerprint = pki::Fingerprint(state_.certificate);
  env.group_id = g.group_id;
  env.sent_at = network_.Now();
  Bytes plain = Frame(MessageKind::kText, AsBytes(text));
  env.payload = crypto::Seal(step.message_key, plain, relay::HeaderBytes(env));
  crypto::SecureWipe(plain);
  Wipe(step.message_key);
  g.group_chain = step.next;
  state_.history.push_back({HistoryDirection::kOutgoing, "", g.group_id,
                            env.counter, std::string(text), env.sent_at});
  return env;
}

std::pair<relay::Envelope, std::vector<relay::MemberAck>> Client::SendGroupMessage(
    std::string_view group_id, std::string_view text) {
  relay::Envelope env = ComposeGroupMessage(group_id, text);
  auto acks = network_.SendGroup(env);
  return {std::move(env), std::move(acks)};
}

ReceivedMessage Client::ReceiveGroup(const relay::Envelope& envelope) {
  auto it = state_.groups.find(*envelope.group_id);
  if (it == state_.groups.end()) {
    throw Error(ErrorCode::kUsage,
                "not a member of group '" + *envelope.group_id + "'");
  }
  GroupState& g = it->second;
  if (std::find(g.member_ids.begin(), g.member_ids.end(), envelope.sender_id) ==
          g.member_ids.end() ||
      envelope.sender_id == state_.user_id) {
    throw Error(ErrorCode::kPermission, "'" + envelope.sender_id +
                                            "' cannot send to group '" +
                                            g.group_id + "'");
  }
  crypto::ChainKey chain = g.group_chain;
  SkippedKeys skipped = g.skipped_keys;
  Bytes plain = OpenWithChain(chain, skipped, envelope.counter, envelope.payload,
                              relay::HeaderBytes(envelope), options_.max_skip);
  if (plain.empty() || plain.front() != static_cast<std::uint8_t>(MessageKind::kText)) {
    throw Error(ErrorCode::kProtocol, "group envelopes carry text only");
  }
  g.group_chain = chain;
  g.skipped_keys = std::move(skipped);

  ReceivedMessage msg;
  msg.kind = MessageKind::kText;
  msg.sender_id = envelope.sender_id;
  msg.group_id = g.group_id;
  msg.counter = envelope.counter;
  msg.text = AsString(ByteView(plain).subspan(1));
  crypto::SecureWipe(plain);
  state_.history.push_back({HistoryDirection::kIncoming, msg.sender_id, g.group_id,
                            msg.counter, msg.text, envelope.sent_at});
  return msg;
}

BackupArchive Client::ExportBackup(std::string_view secret,
                                   std::uint32_t iterations) const {
  return client::ExportBackup(state_, secret, iterations, rng_);
}

}  // namespace ledgerchat::client

#pragma once

// The user-side state machine: install (enroll + register), one-to-one
// sessions over the symmetric ratchet, encrypted backups, and groups.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerchat/client/network.hpp"
#include "ledgerchat/crypto/crypto.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/relay/envelope.hpp"

namespace ledgerchat::client {

inline constexpr std::size_t kDefaultMaxSkip = 1000;

using SkippedKeys = std::map<std::uint64_t, crypto::MessageKey>;

struct SessionState {
  std::string peer_id;
  crypto::MasterSecret master;
  crypto::ChainKey send_chain;
  crypto::ChainKey recv_chain;
  SkippedKeys skipped_keys;
  Hash32 peer_cert_fingerprint{};

  bool operator==(const SessionState&) const = default;
};

// One chain shared by every member, ratcheted once per group message no
// matter who sends it. Two members sending at the same index collide.
struct GroupState {
  std::string group_id;
  std::string admin_id;
  std::vector<std::string> member_ids;  // includes the admin
  Key32 group_key{};
  crypto::ChainKey group_chain;
  SkippedKeys skipped_keys;

  bool operator==(const GroupState&) const = default;
};

enum class HistoryDirection : std::uint8_t { kOutgoing = 0, kIncoming = 1 };

struct HistoryEntry {
  HistoryDirection direction = HistoryDirection::kOutgoing;
  std::string peer_id;
  std::string group_id;  // empty for one-to-one
  std::uint64_t counter = 0;
  std::string text;
  std::int64_t timestamp = 0;

  bool operator==(const HistoryEntry&) const = default;
};

struct ClientState {
  std::string user_id;
  crypto::IdentityKeyPair identity;
  pki::CertificateRecord certificate;
  std::map<std::string, SessionState> sessions;
  std::map<std::string, GroupState> groups;
  std::vector<HistoryEntry> history;
  std::uint64_t mailbox_cursor = 0;

  bool operator==(const ClientState&) const = default;
};

// Full canonical form, identity private key included. Only the backup path
// writes this anywhere.
Bytes SerializeForBackup(const ClientState& state);
ClientState ParseBackupPayload(ByteView bytes);

// --- backup archive -------------------------------------------------------------

inline constexpr std::string_view kBackupMagic = "BEEB1";

// "BEEB1" | salt(16) | iterations(u32 BE) | ciphertext length(u32 BE) |
// ciphertext | mac(32).
struct BackupArchive {
  crypto::Salt salt{};
  std::uint32_t iterations = 0;
  crypto::SealedPayload payload;

  bool operator==(const BackupArchive&) const = default;
};

Bytes Serialize(const BackupArchive& archive);
BackupArchive ParseBackupArchive(ByteView bytes);

BackupArchive ExportBackup(const ClientState& state, std::string_view secret,
                           std::uint32_t iterations = crypto::kDefaultBackupIterations,
                           crypto::EntropySource& rng = crypto::DefaultEntropy());
// kAuthentication for a wrong secret or tampered archive; nothing partial is
// ever returned.
ClientState RestoreBackup(const BackupArchive& archive, std::string_view secret,
                          crypto::KdfPolicy policy = {});

// --- client -----------------------------------------------------------------------

enum class MessageKind : std::uint8_t { kText = 1, kGroupKey = 2 };

struct ReceivedMessage {
  MessageKind kind = MessageKind::kText;
  std::string sender_id;
  std::optional<std::string> group_id;
  std::uint64_t counter = 0;
  std::string text;  // empty for key distributions
};

struct PollItem {
  std::uint64_t seq = 0;
  relay::Envelope envelope;
  std::optional<ReceivedMessage> message;
  std::optional<ErrorCode> error;
  std::string detail;
};

struct GroupCreation {
  std::vector<relay::Envelope> distributions;
  // member id -> why it was left out
  std::map<std::string, std::string> excluded;
};

struct ClientOptions {
  std::size_t max_skip = kDefaultMaxSkip;
};

class Client {
 public:
  Client(ClientState state, Network& network, ClientOptions options = {},
         crypto::EntropySource& rng = crypto::DefaultEntropy());

  // Generate keys, enroll with the MNO, register with the relay. Errors keep
  // their code and name the failing phase in the message.
  static Client Install(std::string user_id, Network& network,
                        ClientOptions options = {},
                        crypto::EntropySource& rng = crypto::DefaultEntropy());
  // The two halves of Install.
  static Client Enroll(std::string user_id, Network& network,
                       ClientOptions options = {},
                       crypto::EntropySource& rng = crypto::DefaultEntropy());
  void Register();

  const ClientState& state() const { return state_; }
  const std::string& user_id() const { return state_.user_id; }
  Network& network() { return network_; }

  // Requires the peer's certificate to be Valid right now.
  void StartSession(std::string_view peer_id);
  bool HasSession(std::string_view peer_id) const;

  // Advances the send chain and returns the sealed envelope without handing
  // it to the network.
  relay::Envelope ComposeText(std::string_view peer_id, std::string_view text);
  // ComposeText + submit.
  relay::Envelope SendText(std::string_view peer_id, std::string_view text);

  // Strict: requires an existing session (or group) and a matching pinned
  // fingerprint. State is untouched on any failure.
  ReceivedMessage ReceiveEnvelope(const relay::Envelope& envelope);

  // Fetches the mailbox and processes everything in order, starting sessions
  // with new senders and restarting one whose peer has re-keyed. Advances the
  // mailbox cursor past every item, failed or not.
  std::vector<PollItem> Poll();

  GroupCreation CreateGroup(std::string_view group_id,
                            const std::vector<std::string>& member_ids);
  relay::Envelope ComposeGroupMessage(std::string_view group_id,
                                      std::string_view text);
  std::pair<relay::Envelope, std::vector<relay::MemberAck>> SendGroupMessage(
      std::string_view group_id, std::string_view text);

  BackupArchive ExportBackup(std::string_view secret,
                             std::uint32_t iterations = crypto::kDefaultBackupIterations) const;

 private:
  SessionState& SessionFor(std::string_view peer_id);
  void CheckPeerStillValid(const SessionState& session);
  relay::Envelope ComposeContent(std::string_view peer_id, MessageKind kind,
                                 ByteView body);
  ReceivedMessage ReceiveDirect(const relay::Envelope& envelope);
  ReceivedMessage ReceiveGroup(const relay::Envelope& envelope);
  void ApplyGroupKey(const std::string& sender, ByteView body);

  ClientState state_;
  Network& network_;
  ClientOptions options_;
  crypto::EntropySource& rng_;
};

// Maps a non-Valid status to the session-refusal error code.
ErrorCode RefusalCode(const pki::CertStatus& status);

}  // namespace ledgerchat::client

#pragma once

// Permissioned, append-only certificate ledger. The newest record for a user
// is the only one that matters: a revocation ("dummy certificate") appended
// after a certificate makes every later lookup return Revoked.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ledgerchat/bytes.hpp"
#include "ledgerchat/crypto/crypto.hpp"

namespace ledgerchat::pki {

using crypto::Signature;

enum class RecordKind : std::uint8_t { kCertificate = 0, kRevocation = 1 };

struct CertificateRecord {
  std::string user_id;
  Key32 subject_public_key{};  // all zero for revocations
  std::string issuer_id;
  std::int64_t issued_at = 0;
  std::int64_t expires_at = 0;
  RecordKind kind = RecordKind::kCertificate;
  Signature issuer_signature{};

  bool operator==(const CertificateRecord&) const = default;
};

// Canonical bytes of every field before the signature; what issuers sign.
Bytes SignedPortion(const CertificateRecord& record);
Bytes Serialize(const CertificateRecord& record);
CertificateRecord ParseCertificateRecord(ByteView bytes);
// SHA-256 of the full canonical record, signature included.
Hash32 Fingerprint(const CertificateRecord& record);

// Field-level consistency (kind/key/lifetime rules), no signature check.
bool IsInternallyConsistent(const CertificateRecord& record);

struct WriterEntry {
  std::string writer_id;
  Key32 verification_key{};

  bool operator==(const WriterEntry&) const = default;
};

struct WriterCredential {
  std::string writer_id;
  crypto::SigningKeyPair key;

  WriterEntry entry() const { return {writer_id, key.public_key}; }
};

CertificateRecord SignRecord(CertificateRecord record,
                             const WriterCredential& issuer);

inline constexpr std::string_view kGenesisWriter = "genesis";

struct Block {
  std::uint64_t height = 0;
  Hash32 prev_hash{};
  std::vector<CertificateRecord> records;
  std::int64_t timestamp = 0;
  std::string writer_id;
  // Only the genesis block declares writers; empty everywhere else.
  std::vector<WriterEntry> writer_set;
  Signature writer_signature{};

  bool operator==(const Block&) const = default;
};

Bytes Serialize(const Block& block);
Block ParseBlock(ByteView bytes);
Hash32 BlockHash(const Block& block);
Hash32 RecordsHash(const std::vector<CertificateRecord>& records);
// height || prev_hash || records-hash || timestamp, canonically encoded.
Bytes WriterSigningMessage(const Block& block);

struct Valid {
  CertificateRecord record;
};
struct Revoked {
  CertificateRecord revocation;
};
struct NotFound {};
struct Expired {
  CertificateRecord record;
};
using CertStatus = std::variant<Valid, Revoked, NotFound, Expired>;

std::string_view StatusName(const CertStatus& status);
inline bool IsValid(const CertStatus& status) {
  return std::holds_alternative<Valid>(status);
}

// Immutable snapshot. Copies share the underlying blocks, so holding or
// passing a snapshot between threads is cheap and safe.
class ChainState {
 public:
  static ChainState Genesis(const std::vector<WriterEntry>& writers,
                            std::int64_t timestamp = 0);
  // Assembles a snapshot from already-parsed blocks without verifying them.
  static ChainState FromBlocks(std::vector<Block> blocks);

  std::uint64_t height() const { return blocks_->back()->height; }
  std::size_t size() const { return blocks_->size(); }
  const Block& block(std::size_t i) const { return *(*blocks_)[i]; }
  const Block& tip() const { return *blocks_->back(); }

  const std::vector<WriterEntry>& writers() const {
    return blocks_->front()->writer_set;
  }
  std::optional<Key32> WriterKey(std::string_view writer_id) const;

  ChainState Extend(Block block) const;

 private:
  using BlockList = std::vector<std::shared_ptr<const Block>>;
  explicit ChainState(std::shared_ptr<const BlockList> blocks)
      : blocks_(std::move(blocks)) {}

  std::shared_ptr<const BlockList> blocks_;
};

// Throws kPermission for writers outside the genesis set and kValidation
// when any record fails its signature or consistency checks; the input state
// is never modified.
ChainState AppendBlock(const ChainState& state, const WriterCredential& writer,
                       std::vector<CertificateRecord> records,
                       std::int64_t now);

// Latest-wins lookup, newest block first.
CertStatus FetchLatest(const ChainState& state, std::string_view user_id,
                       std::int64_t now);

struct VerifyReport {
  bool ok = true;
  std::optional<std::uint64_t> failed_height;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

VerifyReport VerifyChain(const ChainState& state);

CertificateRecord MakeRevocation(const WriterCredential& writer,
                                 std::string_view user_id, std::int64_t now);

// Throws kRevocation when the user has never held a certificate.
ChainState Revoke(const ChainState& state, const WriterCredential& writer,
                  std::string_view user_id, std::int64_t now);

// Chain file: each block as a 4-byte big-endian length and its canonical
// bytes, genesis first.
Bytes SerializeChain(const ChainState& state);
ChainState ParseChain(ByteView bytes);
void SaveChain(const ChainState& state, const std::filesystem::path& path);
ChainState LoadChain(const std::filesystem::path& path);
// Parse + verify; any parse failure is reported as a failed verification.
VerifyReport VerifyChainBytes(ByteView bytes);

// A chain node: the current snapshot plus the single serialized writer gate.
// When a file is attached every accepted block is appended to it before the
// snapshot is published.
class ChainNode {
 public:
  explicit ChainNode(ChainState genesis,
                     std::optional<std::filesystem::path> file = std::nullopt);

  // Loads `file` if it exists (and must verify), otherwise creates it from a
  // fresh genesis with `writers`.
  static std::unique_ptr<ChainNode> Open(const std::filesystem::path& file,
                                         const std::vector<WriterEntry>& writers);

  ChainState Snapshot() const;
  ChainState Append(const WriterCredential& writer,
                    std::vector<CertificateRecord> records, std::int64_t now);
  ChainState Revoke(const WriterCredential& writer, std::string_view user_id,
                    std::int64_t now);

 private:
  ChainState Publish(ChainState next);

  mutable std::mutex snapshot_mu_;
  std::mutex append_mu_;
  ChainState state_;
  std::optional<std::filesystem::path> file_;
};

}  // namespace ledgerchat::pki

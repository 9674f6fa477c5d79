#include "ledgerchat/pki/chain.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "ledgerchat/crypto/primitives.hpp"
#include "ledgerchat/serial.hpp"

namespace ledgerchat::pki {

namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kValidation, what);
}

Bytes SerializeWriters(const std::vector<WriterEntry>& writers) {
  CanonicalWriter w;
  w.U64(writers.size());
  for (const auto& entry : writers) {
    w.Field(entry.writer_id).Field(entry.verification_key);
  }
  return std::move(w).bytes();
}

std::vector<WriterEntry> ParseWriters(ByteView bytes) {
  CanonicalReader r(bytes);
  std::uint64_t n = r.U64();
  std::vector<WriterEntry> out;
  for (std::uint64_t i = 0; i < n; ++i) {
    WriterEntry e;
    e.writer_id = r.Text();
    e.verification_key = r.Fixed<32>();
    out.push_back(std::move(e));
  }
  r.ExpectEnd();
  return out;
}

Bytes SerializeRecords(const std::vector<CertificateRecord>& records) {
  CanonicalWriter w;
  w.U64(records.size());
  for (const auto& rec : records) w.Field(Serialize(rec));
  return std::move(w).bytes();
}

std::vector<CertificateRecord> ParseRecords(ByteView bytes) {
  CanonicalReader r(bytes);
  std::uint64_t n = r.U64();
  std::vector<CertificateRecord> out;
  for (std::uint64_t i = 0; i < n; ++i) {
    out.push_back(ParseCertificateRecord(r.Field()));
  }
  r.ExpectEnd();
  return out;
}

// Empty string when the record verifies; otherwise the reason.
std::string CheckRecord(const ChainState& state,
                        const CertificateRecord& record) {
  if (!IsInternallyConsistent(record)) {
    return "record for '" + record.user_id + "' is internally inconsistent";
  }
  auto key = state.WriterKey(record.issuer_id);
  if (!key) {
    return "record for '" + record.user_id + "' names unknown issuer '" +
           record.issuer_id + "'";
  }
  if (!crypto::Verify(*key, SignedPortion(record), record.issuer_signature)) {
    return "issuer signature on record for '" + record.user_id +
           "' does not verify";
  }
  return {};
}

}  // namespace

// --- records ----------------------------------------------------------------

Bytes SignedPortion(const CertificateRecord& record) {
  CanonicalWriter w;
  w.Field(record.user_id)
      .Field(record.subject_public_key)
      .Field(record.issuer_id)
      .I64(record.issued_at)
      .I64(record.expires_at)
      .U8(static_cast<std::uint8_t>(record.kind));
  return std::move(w).bytes();
}

Bytes Serialize(const CertificateRecord& record) {
  Bytes out = SignedPortion(record);
  CanonicalWriter w;
  w.Field(record.issuer_signature);
  const Bytes& sig = w.bytes();
  out.insert(out.end(), sig.begin(), sig.end());
  return out;
}

CertificateRecord ParseCertificateRecord(ByteView bytes) {
  CanonicalReader r(bytes);
  CertificateRecord rec;
  rec.user_id = r.Text();
  rec.subject_public_key = r.Fixed<32>();
  rec.issuer_id = r.Text();
  rec.issued_at = r.I64();
  rec.expires_at = r.I64();
  std::uint8_t kind = r.U8();
  if (kind > 1) throw Error(ErrorCode::kFormat, "unknown record kind");
  rec.kind = static_cast<RecordKind>(kind);
  rec.issuer_signature = r.Fixed<64>();
  r.ExpectEnd();
  return rec;
}

Hash32 Fingerprint(const CertificateRecord& record) {
  return crypto::Sha256(Serialize(record));
}

bool IsInternallyConsistent(const CertificateRecord& record) {
  if (record.user_id.empty() || record.issuer_id.empty()) return false;
  if (record.kind == RecordKind::kRevocation) {
    return IsAllZero(record.subject_public_key);
  }
  return record.expires_at > record.issued_at &&
         !IsAllZero(record.subject_public_key);
}

CertificateRecord SignRecord(CertificateRecord record,
                             const WriterCredential& issuer) {
  record.issuer_id = issuer.writer_id;
  record.issuer_signature = crypto::Sign(issuer.key, SignedPortion(record));
  return record;
}

// --- blocks -------------------------------------------------------------------

Bytes Serialize(const Block& block) {
  CanonicalWriter w;
  w.U64(block.height)
      .Field(block.prev_hash)
      .Field(SerializeRecords(block.records))
      .I64(block.timestamp)
      .Field(block.writer_id)
      .Field(SerializeWriters(block.writer_set))
      .Field(block.writer_signature);
  return std::move(w).bytes();
}

Block ParseBlock(ByteView bytes) {
  CanonicalReader r(bytes);
  Block b;
  b.height = r.U64();
  b.prev_hash = r.Fixed<32>();
  b.records = ParseRecords(r.Field());
  b.timestamp = r.I64();
  b.writer_id = r.Text();
  b.writer_set = ParseWriters(r.Field());
  b.writer_signature = r.Fixed<64>();
  r.ExpectEnd();
  return b;
}

Hash32 BlockHash(const Block& block) { return crypto::Sha256(Serialize(block)); }

Hash32 RecordsHash(const std::vector<CertificateRecord>& records) {
  return crypto::Sha256(SerializeRecords(records));
}

Bytes WriterSigningMessage(const Block& block) {
  CanonicalWriter w;
  w.U64(block.height)
      .Field(block.prev_hash)
      .Field(RecordsHash(block.records))
      .I64(block.timestamp);
  return std::move(w).bytes();
}

std::string_view StatusName(const CertStatus& status) {
  struct Visitor {
    std::string_view operator()(const Valid&) const { return "valid"; }
    std::string_view operator()(const Revoked&) const { return "revoked"; }
    std::string_view operator()(const NotFound&) const { return "not-found"; }
    std::string_view operator()(const Expired&) const { return "expired"; }
  };
  return std::visit(Visitor{}, status);
}

// --- snapshots ----------------------------------------------------------------

ChainState ChainState::Genesis(const std::vector<WriterEntry>& writers,
                               std::int64_t timestamp) {
  if (writers.empty()) {
    throw Error(ErrorCode::kArgument, "writer set must not be empty");
  }
  std::set<std::string> ids;
  for (const auto& w : writers) {
    if (w.writer_id.empty() || w.writer_id == kGenesisWriter) {
      throw Error(ErrorCode::kArgument, "invalid writer id '" + w.writer_id + "'");
    }
    if (!ids.insert(w.writer_id).second) {
      throw Error(ErrorCode::kArgument, "duplicate writer id '" + w.writer_id + "'");
    }
  }
  Block genesis;
  genesis.timestamp = timestamp;
  genesis.writer_id = std::string(kGenesisWriter);
  genesis.writer_set = writers;
  return FromBlocks({std::move(genesis)});
}

ChainState ChainState::FromBlocks(std::vector<Block> blocks) {
  if (blocks.empty()) {
    throw Error(ErrorCode::kFormat, "chain has no genesis block");
  }
  auto list = std::make_shared<BlockList>();
  list->reserve(blocks.size());
  for (auto& b : blocks) {
    list->push_back(std::make_shared<const Block>(std::move(b)));
  }
  return ChainState(std::move(list));
}

std::optional<Key32> ChainState::WriterKey(std::string_view writer_id) const {
  for (const auto& w : writers()) {
    if (w.writer_id == writer_id) return w.verification_key;
  }
  return std::nullopt;
}

ChainState ChainState::Extend(Block block) const {
  auto list = std::make_shared<BlockList>(*blocks_);
  list->push_back(std::make_shared<const Block>(std::move(block)));
  return ChainState(std::move(list));
}

// --- operations ---------------------------------------------------------------

ChainState AppendBlock(const ChainState& state, const WriterCredential& writer,
                       std::vector<CertificateRecord> records,
                       std::int64_t now) {
  auto key = state.WriterKey(writer.writer_id);
  if (!key || *key != writer.key.public_key) {
    throw Error(ErrorCode::kPermission,
                "'" + writer.writer_id + "' is not an authorized chain writer");
  }
  for (const auto& rec : records) {
    if (std::string why = CheckRecord(state, rec); !why.empty()) Invalid(why);
  }
  Block b;
  b.height = state.height() + 1;
  b.prev_hash = BlockHash(state.tip());
  b.records = std::move(records);
  b.timestamp = now;
  b.writer_id = writer.writer_id;
  b.writer_signature = crypto::Sign(writer.key, WriterSigningMessage(b));
  return state.Extend(std::move(b));
}

CertStatus FetchLatest(const ChainState& state, std::string_view user_id,
                       std::int64_t now) {
  for (std::size_t i = state.size(); i-- > 0;) {
    const auto& records = state.block(i).records;
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
      if (it->user_id != user_id) continue;
      if (it->kind == RecordKind::kRevocation) return Revoked{*it};
      // A certificate that does not verify grants nothing.
      if (!CheckRecord(state, *it).empty()) return NotFound{};
      if (it->expires_at <= now) return Expired{*it};
      return Valid{*it};
    }
  }
  return NotFound{};
}

VerifyReport VerifyChain(const ChainState& state) {
  auto fail = [](std::uint64_t height, std::string why) {
    return VerifyReport{false, height, "height " + std::to_string(height) + ": " + std::move(why)};
  };

  const Block& genesis = state.block(0);
  if (genesis.height != 0 || !IsAllZero(genesis.prev_hash) ||
      !genesis.records.empty() || genesis.writer_id != kGenesisWriter ||
      !IsAllZero(genesis.writer_signature)) {
    return fail(0, "malformed genesis block");
  }
  std::set<std::string> ids;
  for (const auto& w : genesis.writer_set) {
    if (w.writer_id.empty() || !ids.insert(w.writer_id).second) {
      return fail(0, "invalid writer set");
    }
  }
  if (ids.empty()) return fail(0, "empty writer set");

  for (std::size_t i = 1; i < state.size(); ++i) {
    const Block& b = state.block(i);
    const std::uint64_t h = static_cast<std::uint64_t>(i);
    if (b.height != h) return fail(h, "height field is " + std::to_string(b.height));
    if (b.prev_hash != BlockHash(state.block(i - 1))) {
      return fail(h, "prev_hash does not match previous block");
    }
    if (!b.writer_set.empty()) return fail(h, "non-genesis block declares writers");
    auto key = state.WriterKey(b.writer_id);
    if (!key) return fail(h, "writer '" + b.writer_id + "' is not permissioned");
    if (!crypto::Verify(*key, WriterSigningMessage(b), b.writer_signature)) {
      return fail(h, "writer signature does not verify");
    }
    for (const auto& rec : b.records) {
      if (std::string why = CheckRecord(state, rec); !why.empty()) {
        return fail(h, why);
      }
    }
  }
  return {};
}

CertificateRecord MakeRevocation(const WriterCredential& writer,
                                 std::string_view user_id, std::int64_t now) {
  CertificateRecord rec;
  rec.user_id = std::string(user_id);
  rec.issued_at = now;
  rec.expires_at = 0;
  rec.kind = RecordKind::kRevocation;
  return SignRecord(std::move(rec), writer);
}

ChainState Revoke(const ChainState& state, const WriterCredential& writer,
                  std::string_view user_id, std::int64_t now) {
  bool has_certificate = false;
  for (std::size_t i = 0; i < state.size() && !has_certificate; ++i) {
    for (const auto& rec : state.block(i).records) {
      if (rec.user_id == user_id && rec.kind == RecordKind::kCertificate) {
        has_certificate = true;
        break;
      }
    }
  }
  if (!has_certificate) {
    throw Error(ErrorCode::kRevocation,
                "no certificate on chain for '" + std::string(user_id) + "'");
  }
  return AppendBlock(state, writer, {MakeRevocation(writer, user_id, now)}, now);
}

// --- persistence --------------------------------------------------------------

Bytes SerializeChain(const ChainState& state) {
  Bytes out;
  for (std::size_t i = 0; i < state.size(); ++i) {
    Bytes b = Serialize(state.block(i));
    PutU32BE(out, static_cast<std::uint32_t>(b.size()));
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

ChainState ParseChain(ByteView bytes) {
  std::vector<Block> blocks;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) {
      throw Error(ErrorCode::kFormat, "truncated block length");
    }
    std::uint32_t len = GetU32BE(bytes, pos);
    pos += 4;
    if (bytes.size() - pos < len) {
      throw Error(ErrorCode::kFormat, "truncated block");
    }
    blocks.push_back(ParseBlock(bytes.subspan(pos, len)));
    pos += len;
  }
  return ChainState::FromBlocks(std::move(blocks));
}

void SaveChain(const ChainState& state, const std::filesystem::path& path) {
  Bytes data = SerializeChain(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

ChainState LoadChain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)),
             std::istreambuf_iterator<char>());
  return ParseChain(data);
}

VerifyReport VerifyChainBytes(ByteView bytes) {
  try {
    return VerifyChain(ParseChain(bytes));
  } catch (const Error& e) {
    return VerifyReport{false, std::nullopt, std::string("unparseable chain: ") + e.what()};
  }
}

// --- node -----------------------------------------------------------------------

ChainNode::ChainNode(ChainState genesis,
                     std::optional<std::filesystem::path> file)
    : state_(std::move(genesis)), file_(std::move(file)) {}

std::unique_ptr<ChainNode> ChainNode::Open(
    const std::filesystem::path& file, const std::vector<WriterEntry>& writers) {
  if (std::filesystem::exists(file)) {
    ChainState loaded = LoadChain(file);
    if (VerifyReport report = VerifyChain(loaded); !report) {
      throw Error(ErrorCode::kStartup,
                  "chain file " + file.string() + " fails verification: " +
                      report.diagnostic);
    }
    return std::make_unique<ChainNode>(std::move(loaded), file);
  }
  ChainState genesis = ChainState::Genesis(writers);
  SaveChain(genesis, file);
  return std::make_unique<ChainNode>(std::move(genesis), file);
}

ChainState ChainNode::Snapshot() const {
  std::lock_guard lock(snapshot_mu_);
  return state_;
}

ChainState ChainNode::Append(const WriterCredential& writer,
                             std::vector<CertificateRecord> records,
                             std::int64_t now) {
  std::lock_guard gate(append_mu_);
  return Publish(AppendBlock(Snapshot(), writer, std::move(records), now));
}

ChainState ChainNode::Revoke(const WriterCredential& writer,
                             std::string_view user_id, std::int64_t now) {
  std::lock_guard gate(append_mu_);
  return Publish(pki::Revoke(Snapshot(), writer, user_id, now));
}

ChainState ChainNode::Publish(ChainState next) {
  if (file_) {
    Bytes b = Serialize(next.tip());
    Bytes framed;
    PutU32BE(framed, static_cast<std::uint32_t>(b.size()));
    framed.insert(framed.end(), b.begin(), b.end());
    std::ofstream out(*file_, std::ios::binary | std::ios::app);
    out.write(reinterpret_cast<const char*>(framed.data()),
              static_cast<std::streamsize>(framed.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot append to " + file_->string());
  }
  std::lock_guard lock(snapshot_mu_);
  state_ = next;
  return next;
}

}  // namespace ledgerchat::pki

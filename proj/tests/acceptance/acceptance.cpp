// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
//   ledgerchat_acceptance [--only N] [--csv PATH]

#include <algorithm>
#include <array>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ledgerchat/client/session.hpp"
#include "ledgerchat/crypto/crypto.hpp"
#include "ledgerchat/crypto/primitives.hpp"
#include "ledgerchat/harness/bench.hpp"
#include "ledgerchat/harness/stack.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/serial.hpp"
#include "ledgerchat/wire/remote.hpp"
#include "unit/oracle_vectors.hpp"
#include "unit/stack_fixture.hpp"

namespace fs = std::filesystem;
using namespace ledgerchat;
namespace v = ledgerchat::testing::vectors;
using testing::DrainTexts;
using testing::LocalStack;
using testing::MakeWriter;

namespace {

// Raised by Check(); carries the first broken expectation.
struct Failure {
  std::string what;
};

void Check(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

template <typename F>
std::optional<ErrorCode> CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

crypto::MessageKey RandomMessageKey(std::mt19937_64& gen) {
  crypto::MessageKey mk;
  for (auto& b : mk.cipher_key) b = static_cast<std::uint8_t>(gen());
  for (auto& b : mk.mac_key) b = static_cast<std::uint8_t>(gen());
  for (auto& b : mk.iv) b = static_cast<std::uint8_t>(gen());
  return mk;
}

Bytes RandomBytes(std::mt19937_64& gen, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(gen());
  return out;
}

struct Pair {
  LocalStack stack;
  client::Client alice = stack.Install("alice");
  client::Client bob = stack.Install("bob");
  Pair() {
    alice.StartSession("bob");
    bob.StartSession("alice");
  }
};

// --- 1 ----------------------------------------------------------------------------

std::string RatchetSynchrony() {
  const auto start = std::chrono::steady_clock::now();
  auto a = crypto::GenerateIdentityKeyPair(crypto::DefaultEntropy());
  auto b = crypto::GenerateIdentityKeyPair(crypto::DefaultEntropy());
  const auto master_ab = crypto::DeriveMasterSecret(a.private_key, b.public_key);
  const auto master_ba = crypto::DeriveMasterSecret(b.private_key, a.public_key);
  Check(master_ab == master_ba, "master secrets differ");
  auto alice = crypto::InitChains(master_ab, "alice", "bob");
  auto bob = crypto::InitChains(master_ba, "bob", "alice");
  for (int i = 0; i < 1000; ++i) {
    auto as = crypto::RatchetForward(alice.send);
    auto br = crypto::RatchetForward(bob.receive);
    auto bs = crypto::RatchetForward(bob.send);
    auto ar = crypto::RatchetForward(alice.receive);
    Check(as.message_key == br.message_key, "alice->bob key differs at index " + std::to_string(i));
    Check(bs.message_key == ar.message_key, "bob->alice key differs at index " + std::to_string(i));
    Check(as.message_key.index == static_cast<std::uint64_t>(i), "index mismatch");
    alice.send = as.next;
    alice.receive = ar.next;
    bob.send = bs.next;
    bob.receive = br.next;
  }
  const double secs = SecondsSince(start);
  Check(secs < 5.0, "took " + std::to_string(secs) + " s");
  std::ostringstream out;
  out << "1000 indices both directions byte-equal in " << secs << " s";
  return out.str();
}

// --- 2 ----------------------------------------------------------------------------

std::string Roundtrip() {
  std::mt19937_64 gen(2);
  int cases = 0;
  for (std::size_t len : {0u, 1u, 15u, 16u, 17u, 255u, 10'000u}) {
    for (int k = 0; k < 100; ++k) {
      const auto mk = RandomMessageKey(gen);
      const Bytes pt = RandomBytes(gen, len);
      const Bytes ad = RandomBytes(gen, 48);
      Check(crypto::Unseal(mk, crypto::Seal(mk, pt, ad), ad) == pt,
            "roundtrip failed at length " + std::to_string(len));
      ++cases;
    }
  }
  return std::to_string(cases) + " seal/unseal pairs over 7 lengths, 0 failures";
}

// --- 3 ----------------------------------------------------------------------------

std::string TamperSuite() {
  Pair p;
  const relay::Envelope env = p.alice.ComposeText("bob", "tamper target: meet at noon");
  // Recompute the message key the receiver would use for counter 0.
  const auto& session = p.bob.state().sessions.at("alice");
  const auto mk = crypto::RatchetForward(session.recv_chain).message_key;
  const Bytes header = relay::HeaderBytes(env);
  Check(!CodeOf([&] { crypto::Unseal(mk, env.payload, header); }), "untampered envelope did not open");

  const std::size_t ct_bits = env.payload.ciphertext.size() * 8;
  const std::size_t mac_bits = env.payload.mac.size() * 8;
  const std::size_t hdr_bits = header.size() * 8;
  std::mt19937_64 gen(3);
  std::array<int, 3> per_region{};
  int accepted = 0;
  for (int i = 0; i < 10'000; ++i) {
    // Rotate regions so each gets a third, bit uniform within the region.
    const int region = i % 3;
    crypto::SealedPayload payload = env.payload;
    Bytes ad = header;
    if (region == 0) {
      const std::size_t bit = gen() % ct_bits;
      payload.ciphertext[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    } else if (region == 1) {
      const std::size_t bit = gen() % mac_bits;
      payload.mac[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    } else {
      const std::size_t bit = gen() % hdr_bits;
      ad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    }
    ++per_region[region];
    if (!CodeOf([&] { crypto::Unseal(mk, payload, ad); })) ++accepted;
  }
  // The receive path refuses a tampered envelope too and keeps its state.
  relay::Envelope bad = env;
  bad.payload.ciphertext[0] ^= 0x01;
  Check(CodeOf([&] { p.bob.ReceiveEnvelope(bad); }).has_value(), "client accepted tampered envelope");
  Check(p.bob.ReceiveEnvelope(env).text == "tamper target: meet at noon",
        "client state damaged by rejected envelope");
  Check(accepted == 0, std::to_string(accepted) + " forgeries accepted");
  return "10000 flips (ciphertext " + std::to_string(per_region[0]) + ", mac " +
         std::to_string(per_region[1]) + ", header " + std::to_string(per_region[2]) +
         "), 0 accepted";
}

// --- 4 ----------------------------------------------------------------------------

std::string KnownAnswers() {
  using crypto::DeriveMasterSecret;
  const Key32 alice_priv = ArrayFromHex<32>(v::kX25519AlicePriv);
  const Key32 bob_priv = ArrayFromHex<32>(v::kX25519BobPriv);
  crypto::FixedEntropy rng(FromHex(v::kX25519AlicePriv));
  Check(ToHex(crypto::GenerateIdentityKeyPair(rng).public_key) == v::kX25519AlicePub,
        "X25519 public key");
  Check(ToHex(DeriveMasterSecret(alice_priv, ArrayFromHex<32>(v::kX25519BobPub)).bytes) ==
            v::kX25519Shared,
        "X25519 shared secret (alice)");
  Check(ToHex(DeriveMasterSecret(bob_priv, ArrayFromHex<32>(v::kX25519AlicePub)).bytes) ==
            v::kX25519Shared,
        "X25519 shared secret (bob)");

  const std::string_view ikm[] = {v::kHkdf1Ikm, v::kHkdf2Ikm, v::kHkdf3Ikm};
  const std::string_view salt[] = {v::kHkdf1Salt, v::kHkdf2Salt, v::kHkdf3Salt};
  const std::string_view info[] = {v::kHkdf1Info, v::kHkdf2Info, v::kHkdf3Info};
  const std::string_view okm[] = {v::kHkdf1Okm, v::kHkdf2Okm, v::kHkdf3Okm};
  for (int i = 0; i < 3; ++i) {
    Check(ToHex(crypto::Hkdf(FromHex(ikm[i]), FromHex(salt[i]), FromHex(info[i]),
                             FromHex(okm[i]).size())) == okm[i],
          "HKDF case " + std::to_string(i + 1));
  }

  struct Pb {
    std::string_view password, salt;
    std::uint32_t iterations;
    std::string_view key;
  };
  for (const Pb& c : {Pb{v::kPbkdf2_1Password, v::kPbkdf2_1Salt, v::kPbkdf2_1Iterations, v::kPbkdf2_1Key},
                      Pb{v::kPbkdf2_2Password, v::kPbkdf2_2Salt, v::kPbkdf2_2Iterations, v::kPbkdf2_2Key},
                      Pb{v::kPbkdf2_3Password, v::kPbkdf2_3Salt, v::kPbkdf2_3Iterations, v::kPbkdf2_3Key},
                      Pb{v::kPbkdf2_4Password, v::kPbkdf2_4Salt, v::kPbkdf2_4Iterations, v::kPbkdf2_4Key}}) {
    const Bytes expected = FromHex(c.key);
    Check(ToHex(crypto::Pbkdf2HmacSha256(AsBytes(c.password), FromHex(c.salt), c.iterations,
                                         expected.size())) == c.key,
          "PBKDF2 " + std::to_string(c.iterations) + " iterations");
  }

  const Bytes ct = crypto::AesCbcEncryptBlocks(FromHex(v::kAesKey), FromHex(v::kAesIv),
                                               FromHex(v::kAesPlaintext));
  Check(ToHex(ct) == v::kAesCiphertext, "AES-256-CBC encrypt");
  Check(ToHex(crypto::AesCbcDecryptBlocks(FromHex(v::kAesKey), FromHex(v::kAesIv), ct)) ==
            v::kAesPlaintext,
        "AES-256-CBC decrypt");

  Check(ToHex(crypto::HmacSha256(FromHex(v::kHmac1Key), FromHex(v::kHmac1Msg))) == v::kHmac1Mac,
        "HMAC case 1");
  Check(ToHex(crypto::HmacSha256(FromHex(v::kHmac2Key), FromHex(v::kHmac2Msg))) == v::kHmac2Mac,
        "HMAC case 2");
  Check(ToHex(crypto::HmacSha256(FromHex(v::kHmac3Key), FromHex(v::kHmac3Msg))) == v::kHmac3Mac,
        "HMAC case 3");
  return "X25519 x3, HKDF x3, PBKDF2 x4, AES-256-CBC x2, HMAC-SHA256 x3 match the frozen oracle";
}

// --- 5 ----------------------------------------------------------------------------

std::string LatestWins() {
  const auto mno = MakeWriter("mno-1", 0x11);
  const auto im = MakeWriter("im-1", 0x22);
  pki::ChainNode node(pki::ChainState::Genesis({mno.entry(), im.entry()}, 10));
  std::vector<pki::CertificateRecord> log;
  std::mt19937_64 gen(5);
  std::int64_t now = 1000;

  auto oracle = [&](const std::string& user, std::int64_t t) -> std::string {
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
      if (it->user_id != user) continue;
      if (it->kind == pki::RecordKind::kRevocation) return "revoked";
      return it->expires_at <= t ? "expired" : "valid";
    }
    return "not-found";
  };

  int queries = 0, revocations = 0, reissues = 0;
  std::set<std::string> revoked_once;
  for (int event = 0; event < 1000; ++event) {
    const std::string user = "user" + std::to_string(gen() % 50);
    now += 1 + static_cast<std::int64_t>(gen() % 5);
    const bool has_cert = std::any_of(log.begin(), log.end(), [&](const auto& r) {
      return r.user_id == user && r.kind == pki::RecordKind::kCertificate;
    });
    if (gen() % 3 == 0 && has_cert) {
      node.Revoke(gen() % 2 ? mno : im, user, now);
      log.push_back(node.Snapshot().tip().records.back());
      ++revocations;
      revoked_once.insert(user);
      Check(std::holds_alternative<pki::Revoked>(pki::FetchLatest(node.Snapshot(), user, now)),
            "fetch right after revoking " + user + " was not Revoked");
    } else {
      if (revoked_once.count(user)) ++reissues;
      pki::CertificateRecord r;
      r.user_id = user;
      r.subject_public_key.fill(static_cast<std::uint8_t>(gen() | 1));
      r.issuer_id = mno.writer_id;
      r.issued_at = now;
      r.expires_at = now + 1 + static_cast<std::int64_t>(gen() % 60);
      r = pki::SignRecord(r, mno);
      node.Append(mno, {r}, now);
      log.push_back(r);
    }
    const pki::ChainState snap = node.Snapshot();
    for (int q = 0; q < 5; ++q) {
      const std::string who = "user" + std::to_string(gen() % 50);
      const std::int64_t t = now + static_cast<std::int64_t>(gen() % 40);
      Check(pki::StatusName(pki::FetchLatest(snap, who, t)) == oracle(who, t),
            "disagreement for " + who + " at event " + std::to_string(event));
      ++queries;
    }
  }
  Check(pki::VerifyChain(node.Snapshot()).ok, "final chain does not verify");
  return "1000 events (" + std::to_string(revocations) + " revocations, " +
         std::to_string(reissues) + " re-issues), " + std::to_string(queries) +
         " queries agree with linear scan";
}

// --- 6 ----------------------------------------------------------------------------

std::string ChainTamper() {
  const auto start = std::chrono::steady_clock::now();
  const auto mno = MakeWriter("mno-1", 0x11);
  const auto im = MakeWriter("im-1", 0x22);
  pki::ChainState s = pki::ChainState::Genesis({mno.entry(), im.entry()}, 10);
  for (int i = 1; i < 10; ++i) {
    pki::CertificateRecord r;
    r.user_id = "u" + std::to_string(i);
    r.subject_public_key.fill(static_cast<std::uint8_t>(i));
    r.issuer_id = mno.writer_id;
    r.issued_at = 100 + i;
    r.expires_at = 10'000 + i;
    s = pki::AppendBlock(s, mno, {pki::SignRecord(r, mno)}, 100 + i);
  }
  Check(s.size() == 10, "expected 10 blocks");

  const fs::path file = fs::temp_directory_path() /
                        ("ledgerchat-acceptance-chain-" + std::to_string(::getpid()));
  pki::SaveChain(s, file);
  std::ifstream in(file, std::ios::binary);
  Bytes bytes(std::istreambuf_iterator<char>(in), {});
  in.close();
  fs::remove(file);
  Check(pki::VerifyChainBytes(bytes).ok, "untampered file does not verify");

  std::size_t undetected = 0, mutations = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const std::uint8_t original = bytes[i];
    for (std::uint8_t delta : {std::uint8_t{0x01}, std::uint8_t{0x80}, std::uint8_t{0xff}}) {
      bytes[i] = static_cast<std::uint8_t>(original ^ delta);
      if (pki::VerifyChainBytes(bytes).ok) ++undetected;
      ++mutations;
    }
    bytes[i] = original;
  }
  const double secs = SecondsSince(start);
  Check(undetected == 0, std::to_string(undetected) + " mutations went undetected");
  Check(secs < 60.0, "took " + std::to_string(secs) + " s");
  std::ostringstream out;
  out << mutations << " mutations over all " << bytes.size() << " bytes detected in " << secs
      << " s";
  return out.str();
}

// --- 7 ----------------------------------------------------------------------------

std::string ZeroKnowledge() {
  Pair p;
  client::Client carol = p.stack.Install("carol");
  std::vector<Bytes> secrets;
  std::vector<std::string> plaintexts;
  auto add = [&](auto const& arr) { secrets.emplace_back(arr.begin(), arr.end()); };
  auto collect = [&](const client::Client& c) {
    add(c.state().identity.private_key);
    for (const auto& [peer, s] : c.state().sessions) {
      add(s.master.bytes);
      add(s.send_chain.key);
      add(s.recv_chain.key);
      // The next message key on each chain, before it is used.
      const auto next = crypto::RatchetForward(s.send_chain).message_key;
      add(next.cipher_key);
      add(next.mac_key);
    }
    for (const auto& [id, g] : c.state().groups) {
      add(g.group_key);
      add(g.group_chain.key);
    }
  };
  collect(p.alice);
  collect(p.bob);
  collect(carol);
  for (int i = 0; i < 50; ++i) {
    const std::string text = "private note " + std::to_string(i) + " for your eyes only";
    plaintexts.push_back(text);
    collect(p.alice);
    collect(p.bob);
    if (i % 2) {
      p.alice.SendText("bob", text);
    } else {
      p.bob.SendText("alice", text);
    }
    if (i % 4 < 2) {
      DrainTexts(p.alice);
      DrainTexts(p.bob);
    }
  }
  collect(p.alice);
  collect(p.bob);

  Bytes servers = p.stack.relay.SerializeState();
  const Bytes mno = p.stack.authority.SerializeState();
  const Bytes chain = pki::SerializeChain(p.stack.chain.Snapshot());
  servers.insert(servers.end(), mno.begin(), mno.end());
  servers.insert(servers.end(), chain.begin(), chain.end());

  std::size_t leaks = 0;
  for (const auto& s : secrets) leaks += ContainsSubsequence(servers, s);
  for (const auto& t : plaintexts) leaks += ContainsSubsequence(servers, AsBytes(t));
  leaks += ContainsSubsequence(servers, AsBytes("for your eyes only"));
  Check(leaks == 0, std::to_string(leaks) + " secrets or plaintexts found in server state");
  return "scanned " + std::to_string(servers.size()) + " bytes of relay+MNO+chain state for " +
         std::to_string(secrets.size()) + " keys and 50 plaintexts: none found";
}

// --- 8 ----------------------------------------------------------------------------

std::string OutOfOrder() {
  std::array<int, 3> order{0, 1, 2};
  int permutations = 0, replays = 0;
  do {
    Pair p;
    std::vector<relay::Envelope> env;
    for (int i = 0; i < 3; ++i) env.push_back(p.alice.ComposeText("bob", "m" + std::to_string(i)));
    for (int i : order) {
      Check(p.bob.ReceiveEnvelope(env[i]).text == "m" + std::to_string(i), "wrong plaintext");
    }
    for (const auto& e : env) {
      Check(CodeOf([&] { p.bob.ReceiveEnvelope(e); }) == ErrorCode::kReplay,
            "duplicate not rejected as replay");
      ++replays;
    }
    ++permutations;
  } while (std::next_permutation(order.begin(), order.end()));
  Check(permutations == 6, "expected 6 permutations");
  return "6 permutations decrypted, " + std::to_string(replays) + " duplicates rejected as replay";
}

// --- 9 ----------------------------------------------------------------------------

std::string BackupFidelity() {
  Pair p;
  for (int i = 0; i < 3; ++i) {
    p.alice.SendText("bob", "a" + std::to_string(i));
    p.bob.SendText("alice", "b" + std::to_string(i));
  }
  DrainTexts(p.alice);
  DrainTexts(p.bob);
  const std::uint32_t iters = crypto::kMinBackupIterations;
  const auto archive = p.bob.ExportBackup("backup secret", iters);
  const Bytes bytes = client::Serialize(archive);

  const auto restored = client::RestoreBackup(client::ParseBackupArchive(bytes), "backup secret");
  Check(client::SerializeForBackup(restored) == client::SerializeForBackup(p.bob.state()),
        "restored state not canonically equal");

  Check(CodeOf([&] { client::RestoreBackup(archive, "wrong secret"); }) ==
            ErrorCode::kAuthentication,
        "wrong secret was not an authentication error");

  // magic | salt16 | iterations u32 BE | ct_len u32 BE | ct | mac32
  const auto& ct = archive.payload.ciphertext;
  Bytes expected = ToBytes(client::kBackupMagic);
  expected.insert(expected.end(), archive.salt.begin(), archive.salt.end());
  PutU32BE(expected, iters);
  PutU32BE(expected, static_cast<std::uint32_t>(ct.size()));
  expected.insert(expected.end(), ct.begin(), ct.end());
  expected.insert(expected.end(), archive.payload.mac.begin(), archive.payload.mac.end());
  Check(bytes == expected, "archive bytes differ from the documented layout");

  // The payload is sealed under a key derived from the secret alone.
  const auto key = crypto::DeriveBackupKey("backup secret", archive.salt, iters);
  const auto mk = crypto::ExpandMessageKey(key.key, "backup");
  const Bytes ad(bytes.begin(), bytes.begin() + 25);
  Check(crypto::Unseal(mk, archive.payload, ad) == client::SerializeForBackup(p.bob.state()),
        "payload does not open under the documented key schedule");
  return "restore(export) canonical-equal, wrong secret -> authentication, " +
         std::to_string(bytes.size()) + "-byte archive bit-exact to layout";
}

// --- 10 ---------------------------------------------------------------------------

std::string GroupFanOut() {
  LocalStack stack;
  std::vector<client::Client> m;
  for (int i = 0; i < 5; ++i) m.push_back(stack.Install("m" + std::to_string(i)));
  client::Client outsider = stack.Install("eve");
  auto created = m[0].CreateGroup("team", {"m1", "m2", "m3", "m4"});
  Check(created.excluded.empty(), "a member was excluded");
  for (int i = 1; i < 5; ++i) DrainTexts(m[i]);

  auto [env, acks] = m[0].SendGroupMessage("team", "all hands at nine");
  std::size_t delivered = 0;
  for (const auto& a : acks) delivered += a.ack.has_value();
  Check(delivered == 4, std::to_string(delivered) + " deliveries");
  for (int i = 1; i < 5; ++i) {
    Check(DrainTexts(m[i]) == std::vector<std::string>{"all hands at nine"},
          "m" + std::to_string(i) + " did not decrypt the same plaintext");
  }

  relay::Envelope forged;
  forged.sender_id = "eve";
  forged.group_id = "team";
  forged.sender_cert_fingerprint = pki::Fingerprint(outsider.state().certificate);
  forged.sent_at = stack.clock.now();
  const auto mk = crypto::ExpandMessageKey(Key32{}, "forged");
  forged.payload = crypto::Seal(mk, AsBytes("\x01" "wire the money"), relay::HeaderBytes(forged));
  int rejected = 0;
  Check(CodeOf([&] { stack.relay.SendGroup(forged); }).has_value(), "relay accepted the forgery");
  for (int i = 1; i < 5; ++i) rejected += CodeOf([&] { m[i].ReceiveEnvelope(forged); }).has_value();
  Check(rejected == 4, "only " + std::to_string(rejected) + " members rejected the forgery");
  return "1 send -> 4 identical deliveries; forged envelope rejected by relay and all 4 members";
}

// --- 11 ---------------------------------------------------------------------------

std::string BenchShape(const fs::path& csv_path) {
  harness::BenchOptions o;
  o.lengths = harness::LengthRange(10'000, 250);
  auto records = harness::BenchEncrypt(o);
  Check(records.size() == 41, "expected 41 lengths");
  for (const auto& r : records) {
    Check(r.encrypt_us > 0 && r.mac_us > 0 && r.total_encrypt_us > 0, "non-positive time");
  }
  {
    std::ofstream out(csv_path, std::ios::trunc);
    harness::WriteEncryptCsv(out, records, o.seed);
  }
  std::ifstream in(csv_path);
  std::string line;
  std::optional<double> slope, r2;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# slope=", 0) == 0) slope = std::stod(line.substr(8));
    else if (line.rfind("# r_squared=", 0) == 0) r2 = std::stod(line.substr(12));
    else if (!line.empty() && line[0] != '#' && line != "length,encrypt_us,mac_us,total_us") ++rows;
  }
  Check(rows == 41, "CSV has " + std::to_string(rows) + " rows");
  Check(slope.has_value() && r2.has_value(), "fit metadata missing from CSV");
  Check(*slope >= 0, "negative slope " + std::to_string(*slope));
  std::ostringstream out;
  out << "41 lengths, slope=" << *slope << " us/char, r_squared=" << *r2 << " (csv "
      << csv_path.string() << ")";
  return out.str();
}

// --- 12 ---------------------------------------------------------------------------

std::string Walkthrough() {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = fs::temp_directory_path() /
                       ("ledgerchat-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  harness::StackConfig config;
  config.chain_file = dir / "chain.bin";
  config.state_dir = dir / "state";
  config.chain_port = config.mno_port = config.relay_port = 0;

  std::string result;
  {
    harness::Stack stack(config);
    stack.Up();
    for (const auto& [role, answer] : stack.Health()) Check(role == answer, "probe " + role);
    wire::RemoteNetwork net(stack.mno_endpoint(), stack.relay_endpoint(), SystemClock());

    // Enrollment and registration as separate phases.
    auto alice = client::Client::Enroll("alice", net);
    alice.Register();
    auto bob = client::Client::Enroll("bob", net);
    bob.Register();
    auto carol = client::Client::Install("carol", net);

    alice.StartSession("bob");
    std::vector<std::string> to_bob, to_alice;
    for (int i = 0; i < 3; ++i) {
      to_bob.push_back("alice says " + std::to_string(i));
      alice.SendText("bob", to_bob.back());
    }
    Check(DrainTexts(bob) == to_bob, "bob transcript");
    for (int i = 0; i < 3; ++i) {
      to_alice.push_back("bob says " + std::to_string(i));
      bob.SendText("alice", to_alice.back());
    }
    Check(DrainTexts(alice) == to_alice, "alice transcript");
    alice.StartSession("carol");
    alice.SendText("carol", "hello carol");
    Check(DrainTexts(carol) == std::vector<std::string>{"hello carol"}, "carol transcript");

    const client::ClientState exported = alice.state();
    const auto archive = alice.ExportBackup("walkthrough secret", crypto::kMinBackupIterations);

    net.Revoke("bob");
    Check(CodeOf([&] { alice.SendText("bob", "are you still there?"); }) ==
              ErrorCode::kPeerRevoked,
          "send to revoked bob was not refused");
    Check(CodeOf([&] { carol.StartSession("bob"); }) == ErrorCode::kPeerRevoked,
          "new session with revoked bob was not refused");

    client::Client restored(client::RestoreBackup(archive, "walkthrough secret"), net);
    Check(restored.state() == exported, "restored state differs from exported state");
    restored.SendText("carol", "back from backup");
    Check(DrainTexts(carol) == std::vector<std::string>{"back from backup"}, "resume send");
    carol.SendText("alice", "welcome back");
    Check(DrainTexts(restored) == std::vector<std::string>{"welcome back"}, "resume receive");

    Check(pki::VerifyChainBytes(pki::SerializeChain(stack.chain().Snapshot())).ok,
          "chain does not verify");
    stack.Down();
  }
  // The chain survives a restart and still shows the revocation.
  {
    harness::Stack again(config);
    again.Up();
    Check(std::holds_alternative<pki::Revoked>(again.relay().FetchCertificate("bob")),
          "revocation lost across restart");
  }
  fs::remove_all(dir);
  const double secs = SecondsSince(start);
  Check(secs < 30.0, "took " + std::to_string(secs) + " s");
  std::ostringstream out;
  out << "enroll, register, 3+3 messages, revoke-and-refuse, backup, restore, resume over TCP in "
      << secs << " s";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  fs::path csv = "acceptance_bench_encrypt.csv";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--csv") == 0 && i + 1 < argc) {
      csv = argv[++i];
    } else {
      std::cerr << "usage: " << argv[0] << " [--only N] [--csv PATH]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"ratchet synchrony", RatchetSynchrony},
      {"seal/unseal roundtrip", Roundtrip},
      {"tamper suite", TamperSuite},
      {"known-answer crypto", KnownAnswers},
      {"latest-wins revocation", LatestWins},
      {"chain tamper evidence", ChainTamper},
      {"zero-knowledge relay/MNO", ZeroKnowledge},
      {"out-of-order and replay", OutOfOrder},
      {"backup fidelity", BackupFidelity},
      {"group fan-out", GroupFanOut},
      {"benchmark shape", [&] { return BenchShape(csv); }},
      {"end-to-end walkthrough", Walkthrough},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    if (only != 0 && only != n) continue;
    const auto& [name, run] = criteria[i];
    std::string detail;
    bool ok = false;
    try {
      detail = run();
      ok = true;
    } catch (const Failure& f) {
      detail = f.what;
    } catch (const Error& e) {
      detail = "error[" + std::string(e.category()) + "]: " + e.what();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " " << n << " " << name << ": " << detail
              << std::endl;
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}

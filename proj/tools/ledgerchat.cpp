// ledgerchat: local stack, scripted and interactive chat, chain inspection,
// backups and the seal/unseal benchmark.

#include <signal.h>
#include <sys/stat.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ledgerchat/client/session.hpp"
#include "ledgerchat/harness/bench.hpp"
#include "ledgerchat/harness/stack.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/wire/remote.hpp"

namespace fs = std::filesystem;
using namespace ledgerchat;

namespace {

constexpr const char* kBackupSecretEnv = "LEDGERCHAT_BACKUP_SECRET";

Bytes ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void WriteBytesAtomic(const fs::path& path, ByteView bytes, bool private_file) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  if (private_file) ::chmod(tmp.c_str(), 0600);
  fs::rename(tmp, path);
}

std::string TimeString(std::int64_t t) {
  std::time_t tt = static_cast<std::time_t>(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Per-user device state: the client state as a backup archive sealed under a
// random device secret kept next to it. Stands in for a platform keystore.
class DeviceStore {
 public:
  explicit DeviceStore(const harness::StackConfig& config)
      : dir_(config.state_dir / "devices"), iterations_(config.device_kdf_iterations) {}

  bool Exists(const std::string& user) const { return fs::exists(StatePath(user)); }

  client::ClientState Load(const std::string& user) const {
    if (!Exists(user)) {
      throw Error(ErrorCode::kUsage, "no device state for '" + user + "'; run enroll first");
    }
    auto archive = client::ParseBackupArchive(ReadBytes(StatePath(user)));
    return client::RestoreBackup(archive, Secret(user));
  }

  void Save(const client::ClientState& state) const {
    const std::string secret = SecretOrCreate(state.user_id);
    auto archive = client::ExportBackup(state, secret, iterations_);
    WriteBytesAtomic(StatePath(state.user_id), client::Serialize(archive), true);
  }

 private:
  fs::path StatePath(const std::string& user) const { return dir_ / (user + ".state"); }
  fs::path SecretPath(const std::string& user) const { return dir_ / (user + ".secret"); }

  std::string Secret(const std::string& user) const {
    const Bytes b = ReadBytes(SecretPath(user));
    return std::string(b.begin(), b.end());
  }

  std::string SecretOrCreate(const std::string& user) const {
    if (fs::exists(SecretPath(user))) return Secret(user);
    const std::string secret = ToHex(crypto::DefaultEntropy().Draw<32>());
    WriteBytesAtomic(SecretPath(user), AsBytes(secret), true);
    return secret;
  }

  fs::path dir_;
  std::uint32_t iterations_;
};

fs::path PidFile(const harness::StackConfig& c) { return c.state_dir / "stack.pid"; }
fs::path PortsFile(const harness::StackConfig& c) { return c.state_dir / "stack.ports"; }

bool ProcessAlive(pid_t pid) { return pid > 0 && (::kill(pid, 0) == 0 || errno == EPERM); }

std::optional<pid_t> RunningStackPid(const harness::StackConfig& c) {
  std::ifstream in(PidFile(c));
  long pid = 0;
  if (!(in >> pid) || !ProcessAlive(static_cast<pid_t>(pid))) return std::nullopt;
  return static_cast<pid_t>(pid);
}

// Ports actually bound by a running stack (config may have asked for 0).
harness::StackConfig WithLivePorts(harness::StackConfig c) {
  if (!RunningStackPid(c)) return c;
  std::ifstream in(PortsFile(c));
  std::stringstream ss;
  ss << in.rdbuf();
  if (ss.str().empty()) return c;
  harness::StackConfig ports = harness::ParseConfig(ss.str());
  c.chain_port = ports.chain_port;
  c.mno_port = ports.mno_port;
  c.relay_port = ports.relay_port;
  return c;
}

// Everything a client-side command needs.
struct Session {
  explicit Session(const harness::StackConfig& config)
      : live(WithLivePorts(config)),
        network(live.mno_endpoint(), live.relay_endpoint(), SystemClock()),
        devices(config) {
    network.validity_seconds = config.certificate_validity;
  }

  client::Client Open(const std::string& user) {
    return client::Client(devices.Load(user), network);
  }

  harness::StackConfig live;
  wire::RemoteNetwork network;
  DeviceStore devices;
};

std::string Describe(const client::ReceivedMessage& m) {
  std::ostringstream out;
  if (m.group_id) out << "[" << *m.group_id << "] ";
  out << m.sender_id;
  if (m.kind == client::MessageKind::kGroupKey) {
    out << " distributed the key for group '" << m.group_id.value_or("") << "'";
  } else {
    out << ": " << m.text;
  }
  return out.str();
}

// Prints every item; returns the first per-item error so scripted callers can
// see a nonzero exit.
std::optional<Error> PrintPoll(std::ostream& out, const std::vector<client::PollItem>& items,
                               std::string_view prefix = "") {
  std::optional<Error> first;
  for (const auto& item : items) {
    if (item.message) {
      out << prefix << Describe(*item.message) << "\n";
    } else if (item.error) {
      out << prefix << "! seq=" << item.seq << " from " << item.envelope.sender_id
          << " error[" << Category(*item.error) << "]: " << item.detail << "\n";
      if (!first) first = Error(*item.error, item.detail);
    }
  }
  return first;
}

std::string AckText(const relay::SubmitAck& ack) {
  return std::string(ack.status == relay::AckStatus::kDelivered ? "delivered" : "queued") +
         " seq=" + std::to_string(ack.seq);
}

void PrintRecord(std::ostream& out, const pki::CertificateRecord& r) {
  out << "  " << (r.kind == pki::RecordKind::kRevocation ? "revoke " : "cert   ") << r.user_id
      << " issuer=" << r.issuer_id << " issued=" << TimeString(r.issued_at);
  if (r.kind != pki::RecordKind::kRevocation) {
    out << " expires=" << TimeString(r.expires_at)
        << " fingerprint=" << ToHex(pki::Fingerprint(r)).substr(0, 16);
  }
  out << "\n";
}

// --- commands ---------------------------------------------------------------------

int StackUp(const harness::StackConfig& config) {
  if (auto pid = RunningStackPid(config)) {
    throw Error(ErrorCode::kStartup, "a stack is already running (pid " + std::to_string(*pid) + ")");
  }
  // Block the stop signals before any listener thread exists so only sigwait
  // below sees them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);

  harness::Stack stack(config);
  stack.Up();
  const auto chain = stack.chain_endpoint(), mno = stack.mno_endpoint(),
             relay = stack.relay_endpoint();
  const std::string ports = "chain_port=" + std::to_string(chain.port) +
                            "\nmno_port=" + std::to_string(mno.port) +
                            "\nrelay_port=" + std::to_string(relay.port) + "\n";
  WriteBytesAtomic(PortsFile(config), AsBytes(ports), false);
  WriteBytesAtomic(PidFile(config), AsBytes(std::to_string(::getpid()) + "\n"), false);

  const auto snap = stack.chain().Snapshot();
  std::cout << "stack up: chain=" << chain.host << ":" << chain.port << " mno=" << mno.host
            << ":" << mno.port << " relay=" << relay.host << ":" << relay.port
            << " chain_file=" << config.chain_file.string() << " height=" << snap.height()
            << std::endl;

  int sig = 0;
  sigwait(&stop, &sig);
  stack.Down();
  fs::remove(PidFile(config));
  fs::remove(PortsFile(config));
  std::cout << "stack down" << std::endl;
  return 0;
}

int StackDown(const harness::StackConfig& config) {
  auto pid = RunningStackPid(config);
  if (!pid) throw Error(ErrorCode::kUsage, "no running stack under " + config.state_dir.string());
  ::kill(*pid, SIGTERM);
  for (int i = 0; i < 200 && ProcessAlive(*pid); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  if (ProcessAlive(*pid)) throw Error(ErrorCode::kIo, "stack did not stop");
  std::cout << "stack down\n";
  return 0;
}

int StackStatus(const harness::StackConfig& config) {
  harness::StackConfig live = WithLivePorts(config);
  int rc = 0;
  for (const auto& [role, ep] : {std::pair{"chain", live.chain_endpoint()},
                                 std::pair{"mno", live.mno_endpoint()},
                                 std::pair{"relay", live.relay_endpoint()}}) {
    try {
      std::cout << role << " " << ep.host << ":" << ep.port << " " << wire::Probe(ep) << "\n";
    } catch (const Error& e) {
      std::cout << role << " " << ep.host << ":" << ep.port << " down\n";
      rc = ExitStatus(e.code());
    }
  }
  return rc;
}

int Enroll(const harness::StackConfig& config, const std::string& user) {
  Session s(config);
  auto c = client::Client::Enroll(user, s.network);
  s.devices.Save(c.state());
  std::cout << "enrolled " << user << " fingerprint="
            << ToHex(pki::Fingerprint(c.state().certificate)) << " expires="
            << TimeString(c.state().certificate.expires_at) << "\n";
  return 0;
}

int Register(const harness::StackConfig& config, const std::string& user) {
  Session s(config);
  auto c = s.Open(user);
  c.Register();
  s.devices.Save(c.state());
  std::cout << "registered " << user << "\n";
  return 0;
}

int Send(const harness::StackConfig& config, const std::string& from, const std::string& to,
         const std::string& text) {
  Session s(config);
  auto c = s.Open(from);
  if (!c.HasSession(to)) c.StartSession(to);
  relay::Envelope env = c.ComposeText(to, text);
  s.devices.Save(c.state());  // the chain step is spent even if submit fails
  relay::SubmitAck ack = s.network.Submit(env);
  std::cout << "sent " << from << " -> " << to << " counter=" << env.counter << " "
            << AckText(ack) << "\n";
  return 0;
}

int Recv(const harness::StackConfig& config, const std::string& user) {
  Session s(config);
  auto c = s.Open(user);
  auto items = c.Poll();
  s.devices.Save(c.state());
  auto err = PrintPoll(std::cout, items);
  if (items.empty()) std::cout << "(no messages)\n";
  if (err) throw *err;
  return 0;
}

int Chat(const harness::StackConfig& config, const std::string& a, const std::string& b) {
  Session s(config);
  auto ca = s.Open(a);
  auto cb = s.Open(b);
  client::Client* from = &ca;
  client::Client* to = &cb;
  auto save = [&] {
    s.devices.Save(ca.state());
    s.devices.Save(cb.state());
  };
  const bool tty = ::isatty(STDIN_FILENO);
  if (tty) std::cout << "chat " << a << " <-> " << b << "; /swap changes sender, /quit ends\n";
  std::string line;
  while (true) {
    if (tty) std::cout << from->user_id() << "> " << std::flush;
    if (!std::getline(std::cin, line) || line == "/quit") break;
    if (line == "/swap") {
      std::swap(from, to);
      continue;
    }
    if (line.empty()) continue;
    try {
      if (!from->HasSession(to->user_id())) from->StartSession(to->user_id());
      from->SendText(to->user_id(), line);
      auto items = to->Poll();
      PrintPoll(std::cout, items, to->user_id() + " < ");
    } catch (const Error& e) {
      std::cout << "error[" << e.category() << "]: " << e.what() << "\n";
    }
    save();
  }
  save();
  return 0;
}

int GroupCreate(const harness::StackConfig& config, const std::string& admin,
                const std::string& group, const std::vector<std::string>& members) {
  Session s(config);
  auto c = s.Open(admin);
  auto created = c.CreateGroup(group, members);
  s.devices.Save(c.state());
  std::cout << "group " << group << " created by " << admin << ", key sent to "
            << created.distributions.size() << " member(s)\n";
  for (const auto& [member, why] : created.excluded) {
    std::cout << "  excluded " << member << ": " << why << "\n";
  }
  return 0;
}

int GroupSend(const harness::StackConfig& config, const std::string& user,
              const std::string& group, const std::string& text) {
  Session s(config);
  auto c = s.Open(user);
  auto [env, acks] = c.SendGroupMessage(group, text);
  s.devices.Save(c.state());
  std::cout << "group " << group << " counter=" << env.counter << "\n";
  for (const auto& a : acks) {
    if (a.ack) {
      std::cout << "  " << a.member_id << " " << AckText(*a.ack) << "\n";
    } else {
      std::cout << "  " << a.member_id << " error[" << Category(a.error.value_or(ErrorCode::kRouting))
                << "]: " << a.detail << "\n";
    }
  }
  return 0;
}

int RevokeUser(const harness::StackConfig& config, const std::string& user) {
  Session s(config);
  s.network.Revoke(user);
  std::cout << "revoked " << user << "\n";
  return 0;
}

int ChainVerify(const harness::StackConfig& config) {
  const Bytes bytes = ReadBytes(config.chain_file);
  const pki::VerifyReport report = pki::VerifyChainBytes(bytes);
  if (!report) {
    std::ostringstream msg;
    msg << config.chain_file.string() << " failed verification";
    if (report.failed_height) msg << " at height " << *report.failed_height;
    msg << ": " << report.diagnostic;
    throw Error(ErrorCode::kValidation, msg.str());
  }
  const auto state = pki::ParseChain(bytes);
  std::cout << "chain ok: " << config.chain_file.string() << " height=" << state.height()
            << " tip=" << ToHex(pki::BlockHash(state.tip())) << "\n";
  return 0;
}

int ChainShow(const harness::StackConfig& config, const std::string& user) {
  const auto state = pki::LoadChain(config.chain_file);
  if (!user.empty()) {
    const auto status =
        pki::FetchLatest(state, user, std::chrono::duration_cast<std::chrono::seconds>(
                                          std::chrono::system_clock::now().time_since_epoch())
                                          .count());
    std::cout << user << ": " << pki::StatusName(status) << "\n";
    return 0;
  }
  for (std::size_t i = 0; i <= state.height(); ++i) {
    const pki::Block& b = state.block(i);
    std::cout << "block " << b.height << " writer=" << b.writer_id
              << " time=" << TimeString(b.timestamp)
              << " hash=" << ToHex(pki::BlockHash(b)).substr(0, 16) << "\n";
    for (const auto& w : b.writer_set) {
      std::cout << "  writer " << w.writer_id << " key=" << ToHex(w.verification_key).substr(0, 16)
                << "\n";
    }
    for (const auto& r : b.records) PrintRecord(std::cout, r);
  }
  return 0;
}

std::string BackupSecret(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kBackupSecretEnv); env && *env) return env;
  throw Error(ErrorCode::kUsage,
              std::string("backup needs --secret or ") + kBackupSecretEnv);
}

int BackupExport(const harness::StackConfig& config, const std::string& user,
                 const fs::path& out, const std::string& secret, std::uint32_t iterations) {
  DeviceStore devices(config);
  const auto state = devices.Load(user);
  auto archive = client::ExportBackup(state, BackupSecret(secret), iterations);
  const Bytes bytes = client::Serialize(archive);
  WriteBytesAtomic(out, bytes, true);
  std::cout << "backup of " << user << " written to " << out.string() << " (" << bytes.size()
            << " bytes, " << state.history.size() << " history entries)\n";
  return 0;
}

int BackupRestore(const harness::StackConfig& config, const std::string& user,
                  const fs::path& in, const std::string& secret) {
  DeviceStore devices(config);
  auto archive = client::ParseBackupArchive(ReadBytes(in));
  auto state = client::RestoreBackup(archive, BackupSecret(secret));
  if (state.user_id != user) {
    throw Error(ErrorCode::kUsage,
                "archive belongs to '" + state.user_id + "', not '" + user + "'");
  }
  devices.Save(state);
  std::cout << "restored " << user << " (" << state.sessions.size() << " session(s), "
            << state.history.size() << " history entries)\n";
  return 0;
}

struct BenchFlags {
  std::size_t max_len = harness::kDefaultMaxLength;
  std::size_t step = harness::kDefaultStep;
  int reps = harness::kDefaultRepetitions;
  std::uint64_t seed = harness::kDefaultSeed;
  std::string csv = "-";
  bool tampered = false;
};

int Bench(bool encrypt, const BenchFlags& f) {
  harness::BenchOptions o;
  o.lengths = harness::LengthRange(f.max_len, f.step);
  o.repetitions = f.reps;
  o.seed = f.seed;
  o.include_tampered = f.tampered;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (f.csv != "-") {
    file.open(f.csv, std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + f.csv);
    out = &file;
  }
  std::vector<double> xs, ys;
  if (encrypt) {
    auto records = harness::BenchEncrypt(o);
    harness::WriteEncryptCsv(*out, records, o.seed);
    for (const auto& r : records) {
      xs.push_back(static_cast<double>(r.input_length));
      ys.push_back(r.total_encrypt_us);
    }
  } else {
    auto run = harness::BenchDecrypt(o);
    harness::WriteDecryptCsv(*out, run, o.seed);
    for (const auto& r : run.records) {
      xs.push_back(static_cast<double>(r.input_length));
      ys.push_back(r.total_decrypt_us);
    }
    if (run.accepted_forgeries != 0) {
      throw Error(ErrorCode::kAuthentication,
                  std::to_string(run.accepted_forgeries) + " tampered payloads were accepted");
    }
  }
  if (out != &std::cout) {
    std::cout << (encrypt ? "encrypt" : "decrypt") << " bench: " << xs.size()
              << " lengths, csv=" << f.csv;
    if (xs.size() >= 2) {
      auto fit = harness::FitLine(xs, ys);
      std::cout << " slope=" << fit.slope << "us/char r_squared=" << fit.r_squared;
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ledgerchat: end-to-end encrypted chat over a permissioned certificate chain"};
  app.require_subcommand(1);
  std::string config_path = "ledgerchat.conf";
  app.add_option("-c,--config", config_path, "key=value config file (missing file: defaults)");
  std::string state_dir, chain_file;
  app.add_option("--state-dir", state_dir, "overrides state_dir");
  app.add_option("--chain-file", chain_file, "overrides chain_file and the environment");

  std::function<int(const harness::StackConfig&)> action;
  auto set = [&](auto fn) { action = fn; };

  auto* stack = app.add_subcommand("stack", "run or stop the local chain node, MNO and relay");
  stack->require_subcommand(1);
  stack->add_subcommand("up", "start in the foreground until SIGINT/SIGTERM")
      ->callback([&] { set(StackUp); });
  stack->add_subcommand("down", "stop a stack started with 'stack up'")
      ->callback([&] { set(StackDown); });
  stack->add_subcommand("status", "probe all three roles")->callback([&] { set(StackStatus); });

  std::string user, peer, group, text;
  std::vector<std::string> members;

  auto* enroll = app.add_subcommand("enroll", "generate keys and get a certificate from the MNO");
  enroll->add_option("user", user)->required();
  enroll->callback([&] { set([&](const auto& c) { return Enroll(c, user); }); });

  auto* reg = app.add_subcommand("register", "register an enrolled user with the relay");
  reg->add_option("user", user)->required();
  reg->callback([&] { set([&](const auto& c) { return Register(c, user); }); });

  auto* send = app.add_subcommand("send", "send one text message");
  send->add_option("from", user)->required();
  send->add_option("to", peer)->required();
  send->add_option("text", text)->required();
  send->callback([&] { set([&](const auto& c) { return Send(c, user, peer, text); }); });

  auto* recv = app.add_subcommand("recv", "fetch and decrypt pending messages");
  recv->add_option("user", user)->required();
  recv->callback([&] { set([&](const auto& c) { return Recv(c, user); }); });

  auto* chat = app.add_subcommand("chat", "interactive exchange between two local users");
  chat->add_option("a", user)->required();
  chat->add_option("b", peer)->required();
  chat->callback([&] { set([&](const auto& c) { return Chat(c, user, peer); }); });

  auto* grp = app.add_subcommand("group", "group messaging");
  grp->require_subcommand(1);
  auto* gcreate = grp->add_subcommand("create", "create a group and distribute its key");
  gcreate->add_option("admin", user)->required();
  gcreate->add_option("group", group)->required();
  gcreate->add_option("members", members)->required();
  gcreate->callback(
      [&] { set([&](const auto& c) { return GroupCreate(c, user, group, members); }); });
  auto* gsend = grp->add_subcommand("send", "send to every group member");
  gsend->add_option("user", user)->required();
  gsend->add_option("group", group)->required();
  gsend->add_option("text", text)->required();
  gsend->callback([&] { set([&](const auto& c) { return GroupSend(c, user, group, text); }); });

  auto* revoke = app.add_subcommand("revoke", "append a revocation for a user");
  revoke->add_option("user", user)->required();
  revoke->callback([&] { set([&](const auto& c) { return RevokeUser(c, user); }); });

  auto* chain = app.add_subcommand("chain", "inspect the chain file");
  chain->require_subcommand(1);
  chain->add_subcommand("verify", "check hashes and signatures of every block")
      ->callback([&] { set(ChainVerify); });
  auto* show = chain->add_subcommand("show", "list blocks, or one user's latest status");
  show->add_option("--user", user);
  show->callback([&] { set([&](const auto& c) { return ChainShow(c, user); }); });

  std::string secret, archive_path;
  std::uint32_t iterations = crypto::kDefaultBackupIterations;
  auto* backup = app.add_subcommand("backup", "password-protected state archives");
  backup->require_subcommand(1);
  auto* bexport = backup->add_subcommand("export", "write an encrypted archive of a user's state");
  bexport->add_option("user", user)->required();
  bexport->add_option("-o,--out", archive_path)->required();
  bexport->add_option("--secret", secret, std::string("or set ") + kBackupSecretEnv);
  bexport->add_option("--iterations", iterations, "PBKDF2 iterations")
      ->check(CLI::Range(crypto::kMinBackupIterations, 0xffffffffu));
  bexport->callback([&] {
    set([&](const auto& c) { return BackupExport(c, user, archive_path, secret, iterations); });
  });
  auto* brestore = backup->add_subcommand("restore", "replace a user's state from an archive");
  brestore->add_option("user", user)->required();
  brestore->add_option("-i,--in", archive_path)->required();
  brestore->add_option("--secret", secret, std::string("or set ") + kBackupSecretEnv);
  brestore->callback(
      [&] { set([&](const auto& c) { return BackupRestore(c, user, archive_path, secret); }); });

  BenchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "seal/unseal timing per input length");
  bench->require_subcommand(1);
  for (bool encrypt : {true, false}) {
    auto* b = bench->add_subcommand(encrypt ? "enc" : "dec",
                                    encrypt ? "AES-CBC + HMAC sealing" : "MAC check + AES-CBC decrypt");
    b->add_option("--max-len", bench_flags.max_len, "largest input length in characters");
    b->add_option("--step", bench_flags.step, "length increment")->check(CLI::PositiveNumber);
    b->add_option("--reps", bench_flags.reps, "repetitions per length (median reported)")
        ->check(CLI::PositiveNumber);
    b->add_option("--seed", bench_flags.seed, "input generator seed");
    b->add_option("--csv", bench_flags.csv, "output path, '-' for stdout");
    if (!encrypt) b->add_flag("--tampered", bench_flags.tampered, "add one tampered payload per length");
    b->callback([&, encrypt] { set([&, encrypt](const auto&) { return Bench(encrypt, bench_flags); }); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    harness::StackConfig config = harness::LoadConfig(config_path);
    if (!state_dir.empty()) config.state_dir = state_dir;
    if (!chain_file.empty()) config.chain_file = chain_file;
    return action(config);
  } catch (const Error& e) {
    std::cerr << "error[" << e.category() << "]: " << e.what() << "\n";
    return ExitStatus(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
}

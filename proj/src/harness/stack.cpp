#include "ledgerchat/harness/stack.hpp"

#include <sys/stat.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ledgerchat::harness {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kArgument,
                "config: '" + std::string(key) + "' expects a number, got '" +
                    std::string(value) + "'");
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// --- config -----------------------------------------------------------------------

StackConfig ParseConfig(std::string_view text) {
  StackConfig c;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kArgument,
                  "config line " + std::to_string(line_no) + " has no '='");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "chain_file") {
      c.chain_file = std::string(value);
    } else if (key == "state_dir") {
      c.state_dir = std::string(value);
    } else if (key == "host") {
      c.host = std::string(value);
    } else if (key == "chain_port") {
      c.chain_port = ParseNumber<std::uint16_t>(key, value);
    } else if (key == "mno_port") {
      c.mno_port = ParseNumber<std::uint16_t>(key, value);
    } else if (key == "relay_port") {
      c.relay_port = ParseNumber<std::uint16_t>(key, value);
    } else if (key == "mno_id") {
      c.mno_id = std::string(value);
    } else if (key == "relay_id") {
      c.relay_id = std::string(value);
    } else if (key == "snapshot_refresh_seconds") {
      c.snapshot_refresh_seconds = ParseNumber<std::int64_t>(key, value);
    } else if (key == "certificate_validity") {
      c.certificate_validity = ParseNumber<std::int64_t>(key, value);
    } else if (key == "device_kdf_iterations") {
      c.device_kdf_iterations = ParseNumber<std::uint32_t>(key, value);
    } else {
      throw Error(ErrorCode::kArgument, "config: unknown key '" + std::string(key) + "'");
    }
  }
  if (c.mno_id.empty() || c.relay_id.empty() || c.mno_id == c.relay_id) {
    throw Error(ErrorCode::kArgument, "config: mno_id and relay_id must be distinct and non-empty");
  }
  return c;
}

StackConfig LoadConfig(const std::filesystem::path& path) {
  StackConfig c = std::filesystem::exists(path) ? ParseConfig(ReadFile(path)) : StackConfig{};
  ApplyEnvironment(c);
  return c;
}

void ApplyEnvironment(StackConfig& config) {
  if (const char* chain = std::getenv(kChainFileEnv); chain != nullptr && *chain != '\0') {
    config.chain_file = chain;
  }
}

std::string FormatConfig(const StackConfig& c) {
  std::ostringstream out;
  out << "chain_file=" << c.chain_file.string() << "\n"
      << "state_dir=" << c.state_dir.string() << "\n"
      << "host=" << c.host << "\n"
      << "chain_port=" << c.chain_port << "\n"
      << "mno_port=" << c.mno_port << "\n"
      << "relay_port=" << c.relay_port << "\n"
      << "mno_id=" << c.mno_id << "\n"
      << "relay_id=" << c.relay_id << "\n"
      << "snapshot_refresh_seconds=" << c.snapshot_refresh_seconds << "\n"
      << "certificate_validity=" << c.certificate_validity << "\n"
      << "device_kdf_iterations=" << c.device_kdf_iterations << "\n";
  return out.str();
}

// --- writers ----------------------------------------------------------------------

std::map<std::string, pki::WriterCredential> LoadOrCreateWriters(const StackConfig& config) {
  std::filesystem::create_directories(config.state_dir);
  const auto path = config.state_dir / "writers.keys";
  std::map<std::string, Key32> seeds;
  if (std::filesystem::exists(path)) {
    std::istringstream in(ReadFile(path));
    std::string id, hex;
    while (in >> id >> hex) seeds[id] = ArrayFromHex<32>(hex);
  }
  bool changed = false;
  for (const auto& id : {config.mno_id, config.relay_id}) {
    if (!seeds.count(id)) {
      seeds[id] = crypto::DefaultEntropy().Draw<32>();
      changed = true;
    }
  }
  if (changed) {
    {
      std::ofstream out(path, std::ios::trunc);
      for (const auto& [id, seed] : seeds) out << id << ' ' << ToHex(seed) << '\n';
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    }
    ::chmod(path.c_str(), 0600);
  }
  std::map<std::string, pki::WriterCredential> out;
  for (const auto& [id, seed] : seeds) {
    out.emplace(id, pki::WriterCredential{id, crypto::SigningKeyPairFromSeed(seed)});
  }
  return out;
}

// --- stack ------------------------------------------------------------------------

Stack::Stack(StackConfig config) : config_(std::move(config)) {}

Stack::~Stack() { Down(); }

void Stack::Up() {
  if (up()) throw Error(ErrorCode::kStartup, "stack is already up");
  {
    std::set<std::uint16_t> ports;
    for (std::uint16_t p : {config_.chain_port, config_.mno_port, config_.relay_port}) {
      if (p != 0 && !ports.insert(p).second) {
        throw Error(ErrorCode::kStartup,
                    "port " + std::to_string(p) + " is assigned to more than one role");
      }
    }
  }

  try {
    auto writers = LoadOrCreateWriters(config_);
    const auto& mno = writers.at(config_.mno_id);
    const auto& im = writers.at(config_.relay_id);
    if (config_.chain_file.has_parent_path()) {
      std::filesystem::create_directories(config_.chain_file.parent_path());
    }
    try {
      chain_ = pki::ChainNode::Open(config_.chain_file, {mno.entry(), im.entry()});
    } catch (const Error& e) {
      throw Error(ErrorCode::kStartup, std::string("chain: ") + e.what());
    }
    const pki::ChainState snap = chain_->Snapshot();
    for (const auto* w : {&mno, &im}) {
      if (snap.WriterKey(w->writer_id) != w->key.public_key) {
        throw Error(ErrorCode::kStartup, "chain file " + config_.chain_file.string() +
                                             " does not list writer '" + w->writer_id +
                                             "' with this stack's key");
      }
    }
    Clock clock = SystemClock();
    authority_ = std::make_unique<mno::CertificateAuthority>(mno, *chain_, clock);
    relay_ = std::make_unique<relay::Relay>(
        *chain_, clock, relay::RelayOptions{config_.snapshot_refresh_seconds});

    chain_server_ = std::make_unique<wire::Server>(
        wire::Role::kChainNode, wire::Services{chain_.get(), nullptr, nullptr, clock});
    mno_server_ = std::make_unique<wire::Server>(
        wire::Role::kMno, wire::Services{nullptr, authority_.get(), nullptr, clock});
    auto relay_server = std::make_unique<wire::Server>(
        wire::Role::kRelay, wire::Services{nullptr, nullptr, relay_.get(), clock});
    chain_server_->Start(config_.chain_port);
    mno_server_->Start(config_.mno_port);
    relay_server->Start(config_.relay_port);
    relay_server_ = std::move(relay_server);
  } catch (...) {
    chain_server_.reset();
    mno_server_.reset();
    relay_.reset();
    authority_.reset();
    chain_.reset();
    throw;
  }
}

void Stack::Down() {
  // Listeners first, then the services they point into.
  relay_server_.reset();
  mno_server_.reset();
  chain_server_.reset();
  relay_.reset();
  authority_.reset();
  chain_.reset();
}

wire::Endpoint Stack::chain_endpoint() const {
  return {config_.host, chain_server_ ? chain_server_->port() : config_.chain_port};
}
wire::Endpoint Stack::mno_endpoint() const {
  return {config_.host, mno_server_ ? mno_server_->port() : config_.mno_port};
}
wire::Endpoint Stack::relay_endpoint() const {
  return {config_.host, relay_server_ ? relay_server_->port() : config_.relay_port};
}

std::map<std::string, std::string> Stack::Health() const {
  std::map<std::string, std::string> out;
  out["chain"] = wire::Probe(chain_endpoint());
  out["mno"] = wire::Probe(mno_endpoint());
  out["relay"] = wire::Probe(relay_endpoint());
  return out;
}

}  // namespace ledgerchat::harness

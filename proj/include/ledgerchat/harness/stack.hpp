#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "ledgerchat/mno/authority.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/relay/relay.hpp"
#include "ledgerchat/wire/remote.hpp"
#include "ledgerchat/wire/server.hpp"

namespace ledgerchat::harness {

// Overrides chain_file when set.
inline constexpr const char* kChainFileEnv = "LEDGERCHAT_CHAIN_FILE";

// key=value lines; '#' starts a comment. Relative paths are taken as given
// (relative to the working directory).
struct StackConfig {
  std::filesystem::path chain_file = "ledgerchat-chain.bin";
  std::filesystem::path state_dir = ".ledgerchat";
  std::string host = "127.0.0.1";
  std::uint16_t chain_port = 7401;
  std::uint16_t mno_port = 7402;
  std::uint16_t relay_port = 7403;
  std::string mno_id = "mno-1";
  std::string relay_id = "im-1";
  std::int64_t snapshot_refresh_seconds = 0;
  std::int64_t certificate_validity = mno::kDefaultValiditySeconds;
  std::uint32_t device_kdf_iterations = crypto::kDefaultBackupIterations;

  wire::Endpoint chain_endpoint() const { return {host, chain_port}; }
  wire::Endpoint mno_endpoint() const { return {host, mno_port}; }
  wire::Endpoint relay_endpoint() const { return {host, relay_port}; }
};

// kArgument for unknown keys or unparsable values.
StackConfig ParseConfig(std::string_view text);
// Defaults when `path` does not exist; then applies the environment.
StackConfig LoadConfig(const std::filesystem::path& path);
void ApplyEnvironment(StackConfig& config);
std::string FormatConfig(const StackConfig& config);

// Writer signing credentials, created on first use and kept under
// state_dir so a restarted stack can keep appending to its chain.
std::map<std::string, pki::WriterCredential> LoadOrCreateWriters(
    const StackConfig& config);

// Chain node + MNO + relay, each behind its own listener.
class Stack {
 public:
  explicit Stack(StackConfig config);
  ~Stack();

  // kStartup on port conflicts, an unusable chain file, or a chain whose
  // writer set does not include this stack's writers. Nothing keeps running
  // after a failed Up.
  void Up();
  void Down();
  bool up() const { return relay_server_ != nullptr; }

  const StackConfig& config() const { return config_; }
  // Actual bound endpoints (differ from config when it asked for port 0).
  wire::Endpoint chain_endpoint() const;
  wire::Endpoint mno_endpoint() const;
  wire::Endpoint relay_endpoint() const;

  // Role name as answered by each listener, keyed by role.
  std::map<std::string, std::string> Health() const;

  pki::ChainNode& chain() { return *chain_; }
  mno::CertificateAuthority& authority() { return *authority_; }
  relay::Relay& relay() { return *relay_; }

 private:
  StackConfig config_;
  std::unique_ptr<pki::ChainNode> chain_;
  std::unique_ptr<mno::CertificateAuthority> authority_;
  std::unique_ptr<relay::Relay> relay_;
  std::unique_ptr<wire::Server> chain_server_;
  std::unique_ptr<wire::Server> mno_server_;
  std::unique_ptr<wire::Server> relay_server_;
};

}  // namespace ledgerchat::harness

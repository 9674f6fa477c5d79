#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ledgerchat/client/network.hpp"
#include "ledgerchat/client/session.hpp"
#include "ledgerchat/clock.hpp"
#include "ledgerchat/mno/authority.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/relay/relay.hpp"

namespace ledgerchat::testing {

inline pki::WriterCredential MakeWriter(std::string id, std::uint8_t seed_byte) {
  Key32 seed{};
  seed.fill(seed_byte);
  return {std::move(id), crypto::SigningKeyPairFromSeed(seed)};
}

// Chain node + MNO + relay in one process, on a manual clock.
struct LocalStack {
  explicit LocalStack(relay::RelayOptions relay_options = {})
      : mno(MakeWriter("mno-1", 0x11)),
        im(MakeWriter("im-1", 0x22)),
        chain(pki::ChainState::Genesis({mno.entry(), im.entry()}, clock.now())),
        authority(mno, chain, clock.AsClock()),
        relay(chain, clock.AsClock(), relay_options),
        network(authority, relay, clock.AsClock()) {}

  client::Client Install(const std::string& user, client::ClientOptions options = {}) {
    return client::Client::Install(user, network, options);
  }

  ManualClock clock;
  pki::WriterCredential mno;
  pki::WriterCredential im;
  pki::ChainNode chain;
  mno::CertificateAuthority authority;
  relay::Relay relay;
  client::LocalNetwork network;
};

// Processes every pending delivery for `c`, returning the texts in order and
// failing the test on any per-item error.
inline std::vector<std::string> DrainTexts(client::Client& c) {
  std::vector<std::string> out;
  for (const auto& item : c.Poll()) {
    if (item.error) {
      throw Error(*item.error, item.detail);
    }
    if (item.message && item.message->kind == client::MessageKind::kText) {
      out.push_back(item.message->text);
    }
  }
  return out;
}

}  // namespace ledgerchat::testing

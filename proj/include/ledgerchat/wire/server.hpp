#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "ledgerchat/clock.hpp"
#include "ledgerchat/wire/protocol.hpp"

namespace ledgerchat::wire {

enum class Role { kChainNode, kMno, kRelay };

std::string_view RoleName(Role role);

// What a role serves. Only the members its role needs must be set.
struct Services {
  pki::ChainNode* chain = nullptr;
  mno::CertificateAuthority* authority = nullptr;
  relay::Relay* relay = nullptr;
  Clock clock;
};

// Loopback TCP listener, one thread per connection. Every request line gets
// exactly one reply line: an ack carrying the result or an error.
class Server {
 public:
  Server(Role role, Services services);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds 127.0.0.1:port (0 picks a free port). kStartup if the port is
  // taken.
  void Start(std::uint16_t port);
  void Stop();
  bool running() const { return listen_fd_ >= 0; }
  std::uint16_t port() const { return port_; }
  Role role() const { return role_; }

  // Dispatch without the socket; errors come back as kError messages.
  Message Handle(const Message& request);

 private:
  Bytes Dispatch(const Message& request);
  void AcceptLoop();
  void Serve(int fd);

  Role role_;
  Services services_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;

  std::mutex conn_mu_;
  std::list<int> open_fds_;
  std::list<std::thread> workers_;
};

}  // namespace ledgerchat::wire

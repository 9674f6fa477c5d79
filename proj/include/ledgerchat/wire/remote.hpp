#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>

#include "ledgerchat/client/network.hpp"
#include "ledgerchat/wire/protocol.hpp"

namespace ledgerchat::wire {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

// One blocking client connection. kIo when the peer cannot be reached or
// hangs up; a remote error reply is rethrown with its original code.
class Connection {
 public:
  static Connection Dial(const Endpoint& endpoint);
  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  ~Connection();

  // Sends one request and returns the body of the ack.
  Bytes Call(MessageType type, ByteView body);
  // Sends one raw line and returns the raw reply line.
  std::string RoundTrip(std::string_view line);

 private:
  explicit Connection(int fd) : fd_(fd) {}
  void Close();

  int fd_ = -1;
  std::string buffer_;
};

// Health probe: the role name the endpoint answers with.
std::string Probe(const Endpoint& endpoint);

// Client-side Network over the line protocol. Enrollment goes to the MNO,
// everything else to the relay.
class RemoteNetwork final : public client::Network {
 public:
  RemoteNetwork(Endpoint mno, Endpoint relay, Clock clock);

  mno::Challenge RequestChallenge(std::string_view user_id) override;
  pki::CertificateRecord Enroll(const mno::EnrollmentRequest& request) override;
  void Register(std::string_view user_id, const Hash32& fingerprint) override;
  pki::CertStatus FetchCertificate(std::string_view user_id) override;
  relay::SubmitAck Submit(const relay::Envelope& envelope) override;
  std::vector<relay::Delivery> Fetch(std::string_view user_id,
                                     std::uint64_t after_seq) override;
  void CreateGroup(std::string_view group_id, std::string_view admin_id,
                   const std::vector<std::string>& member_ids) override;
  std::vector<relay::MemberAck> SendGroup(const relay::Envelope& envelope) override;
  std::int64_t Now() override { return clock_(); }

  // Not part of Network: asks the MNO to revoke.
  void Revoke(std::string_view user_id);

  std::int64_t validity_seconds = mno::kDefaultValiditySeconds;

 private:
  Bytes CallMno(MessageType type, ByteView body);
  Bytes CallRelay(MessageType type, ByteView body);

  Endpoint mno_endpoint_;
  Endpoint relay_endpoint_;
  Clock clock_;
  std::mutex mu_;
  std::optional<Connection> mno_;
  std::optional<Connection> relay_;
};

}  // namespace ledgerchat::wire

#include "ledgerchat/wire/remote.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "ledgerchat/serial.hpp"
#include "socket_io.hpp"

namespace ledgerchat::wire {

// --- connection -------------------------------------------------------------------

Connection Connection::Dial(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(endpoint.port);
  if (int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorCode::kIo, "cannot resolve " + endpoint.host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw Error(ErrorCode::kIo,
                "cannot connect to " + endpoint.host + ":" + port);
  }
  return Connection(fd);
}

Connection::Connection(Connection&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), buffer_(std::move(other.buffer_)) {}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    Close();
    fd_ = std::exchange(other.fd_, -1);
    buffer_ = std::move(other.buffer_);
  }
  return *this;
}

Connection::~Connection() { Close(); }

void Connection::Close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

std::string Connection::RoundTrip(std::string_view line) {
  if (fd_ < 0) throw Error(ErrorCode::kIo, "connection is closed");
  std::string out(line);
  out.push_back('\n');
  detail::WriteAll(fd_, out);
  std::string reply;
  if (!detail::ReadLine(fd_, buffer_, reply)) {
    Close();
    throw Error(ErrorCode::kIo, "server closed the connection");
  }
  return reply;
}

Bytes Connection::Call(MessageType type, ByteView body) {
  Message reply = DecodeLine(RoundTrip(EncodeLine({type, Bytes(body.begin(), body.end())})));
  if (reply.type == MessageType::kError) throw DecodeError(reply.body);
  if (reply.type != MessageType::kAck) {
    throw Error(ErrorCode::kProtocol, "unexpected reply type '" +
                                          std::string(TypeName(reply.type)) + "'");
  }
  return std::move(reply.body);
}

std::string Probe(const Endpoint& endpoint) {
  Connection c = Connection::Dial(endpoint);
  Bytes body = c.Call(MessageType::kAck, {});
  CanonicalReader r(body);
  std::string role = r.Text();
  r.ExpectEnd();
  return role;
}

// --- remote network ---------------------------------------------------------------

RemoteNetwork::RemoteNetwork(Endpoint mno, Endpoint relay, Clock clock)
    : mno_endpoint_(std::move(mno)),
      relay_endpoint_(std::move(relay)),
      clock_(std::move(clock)) {}

namespace {

Bytes CallVia(std::optional<Connection>& conn, const Endpoint& endpoint,
              MessageType type, ByteView body) {
  if (!conn) conn.emplace(Connection::Dial(endpoint));
  try {
    return conn->Call(type, body);
  } catch (const Error& e) {
    // Drop the socket after transport failures so the next call redials.
    if (e.code() == ErrorCode::kIo) conn.reset();
    throw;
  }
}

}  // namespace

Bytes RemoteNetwork::CallMno(MessageType type, ByteView body) {
  std::lock_guard lock(mu_);
  return CallVia(mno_, mno_endpoint_, type, body);
}

Bytes RemoteNetwork::CallRelay(MessageType type, ByteView body) {
  std::lock_guard lock(mu_);
  return CallVia(relay_, relay_endpoint_, type, body);
}

mno::Challenge RemoteNetwork::RequestChallenge(std::string_view user_id) {
  Bytes body = CallMno(MessageType::kEnroll, EncodeChallengeRequest(user_id));
  CanonicalReader r(body);
  auto challenge = r.Fixed<32>();
  r.ExpectEnd();
  return challenge;
}

pki::CertificateRecord RemoteNetwork::Enroll(const mno::EnrollmentRequest& request) {
  Bytes body = CallMno(MessageType::kEnroll, EncodeEnrollRequest(request, validity_seconds));
  CanonicalReader r(body);
  auto record = pki::ParseCertificateRecord(r.Field());
  r.ExpectEnd();
  return record;
}

void RemoteNetwork::Revoke(std::string_view user_id) {
  CanonicalWriter w;
  w.Field(user_id);
  CallMno(MessageType::kRevoke, w.bytes());
}

void RemoteNetwork::Register(std::string_view user_id, const Hash32& fingerprint) {
  CanonicalWriter w;
  w.Field(user_id).Field(fingerprint);
  CallRelay(MessageType::kRegister, w.bytes());
}

pki::CertStatus RemoteNetwork::FetchCertificate(std::string_view user_id) {
  CanonicalWriter w;
  w.Field(user_id);
  return DecodeCertStatus(CallRelay(MessageType::kFetchCert, w.bytes()));
}

relay::SubmitAck RemoteNetwork::Submit(const relay::Envelope& envelope) {
  CanonicalWriter w;
  w.Field(relay::Serialize(envelope));
  return DecodeSubmitAck(CallRelay(MessageType::kSubmit, w.bytes()));
}

std::vector<relay::Delivery> RemoteNetwork::Fetch(std::string_view user_id,
                                                  std::uint64_t after_seq) {
  CanonicalWriter w;
  w.Field(user_id).U64(after_seq);
  return DecodeDeliveries(CallRelay(MessageType::kFetch, w.bytes()));
}

void RemoteNetwork::CreateGroup(std::string_view group_id, std::string_view admin_id,
                                const std::vector<std::string>& member_ids) {
  CanonicalWriter w;
  w.Field(group_id).Field(admin_id).U64(member_ids.size());
  for (const auto& m : member_ids) w.Field(m);
  CallRelay(MessageType::kGroupCreate, w.bytes());
}

std::vector<relay::MemberAck> RemoteNetwork::SendGroup(const relay::Envelope& envelope) {
  CanonicalWriter w;
  w.Field(relay::Serialize(envelope));
  return DecodeMemberAcks(CallRelay(MessageType::kGroupSend, w.bytes()));
}

}  // namespace ledgerchat::wire

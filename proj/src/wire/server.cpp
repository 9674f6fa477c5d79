#include "ledgerchat/wire/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "ledgerchat/serial.hpp"
#include "socket_io.hpp"

namespace ledgerchat::wire {

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kChainNode:
      return "chain";
    case Role::kMno:
      return "mno";
    case Role::kRelay:
      return "relay";
  }
  return "unknown";
}

Server::Server(Role role, Services services)
    : role_(role), services_(std::move(services)) {
  const bool ok = (role == Role::kChainNode && services_.chain) ||
                  (role == Role::kMno && services_.authority) ||
                  (role == Role::kRelay && services_.relay);
  if (!ok || !services_.clock) {
    throw Error(ErrorCode::kArgument,
                "missing services for the " + std::string(RoleName(role)) + " role");
  }
}

Server::~Server() { Stop(); }

// --- dispatch ---------------------------------------------------------------------

namespace {

Error Unsupported(Role role, MessageType type) {
  return Error(ErrorCode::kProtocol, "the " + std::string(RoleName(role)) +
                                         " role does not handle '" +
                                         std::string(TypeName(type)) + "'");
}

}  // namespace

Bytes Server::Dispatch(const Message& request) {
  CanonicalReader r(request.body);
  CanonicalWriter w;
  const MessageType type = request.type;

  if (type == MessageType::kAck) {
    r.ExpectEnd();
    w.Field(RoleName(role_));
    return std::move(w).bytes();
  }

  switch (role_) {
    case Role::kChainNode: {
      if (type != MessageType::kFetchCert) throw Unsupported(role_, type);
      std::string user = r.Text();
      r.ExpectEnd();
      return EncodeCertStatus(
          pki::FetchLatest(services_.chain->Snapshot(), user, services_.clock()));
    }

    case Role::kMno: {
      auto& ca = *services_.authority;
      if (type == MessageType::kEnroll) {
        const auto phase = static_cast<EnrollPhase>(r.U8());
        if (phase == EnrollPhase::kChallenge) {
          std::string user = r.Text();
          r.ExpectEnd();
          w.Field(ca.IssueChallenge(user));
          return std::move(w).bytes();
        }
        if (phase != EnrollPhase::kRequest) {
          throw Error(ErrorCode::kProtocol, "unknown enrollment phase");
        }
        mno::EnrollmentRequest req = mno::ParseEnrollmentRequest(r.Field());
        std::int64_t validity = r.I64();
        r.ExpectEnd();
        w.Field(pki::Serialize(ca.IssueCertificate(req, validity)));
        return std::move(w).bytes();
      }
      if (type == MessageType::kRevoke) {
        std::string user = r.Text();
        r.ExpectEnd();
        ca.Revoke(user);
        return {};
      }
      throw Unsupported(role_, type);
    }

    case Role::kRelay: {
      auto& relay = *services_.relay;
      switch (type) {
        case MessageType::kRegister: {
          std::string user = r.Text();
          Hash32 fp = r.Fixed<32>();
          r.ExpectEnd();
          relay.RegisterUser(user, fp);
          return {};
        }
        case MessageType::kFetchCert: {
          std::string user = r.Text();
          r.ExpectEnd();
          return EncodeCertStatus(relay.FetchCertificate(user));
        }
        case MessageType::kSubmit: {
          relay::Envelope env = relay::ParseEnvelope(r.Field());
          r.ExpectEnd();
          return EncodeSubmitAck(relay.SubmitEnvelope(env));
        }
        case MessageType::kFetch: {
          std::string user = r.Text();
          std::uint64_t after = r.U64();
          r.ExpectEnd();
          return EncodeDeliveries(relay.FetchEnvelopes(user, after));
        }
        case MessageType::kGroupCreate: {
          std::string group = r.Text();
          std::string admin = r.Text();
          std::vector<std::string> members;
          for (std::uint64_t n = r.U64(); n > 0; --n) members.push_back(r.Text());
          r.ExpectEnd();
          relay.CreateGroup(group, admin, std::move(members));
          return {};
        }
        case MessageType::kGroupSend: {
          relay::Envelope env = relay::ParseEnvelope(r.Field());
          r.ExpectEnd();
          return EncodeMemberAcks(relay.SendGroup(env));
        }
        default:
          throw Unsupported(role_, type);
      }
    }
  }
  throw Unsupported(role_, type);
}

Message Server::Handle(const Message& request) {
  try {
    return {MessageType::kAck, Dispatch(request)};
  } catch (const Error& e) {
    return {MessageType::kError, EncodeError(e)};
  } catch (const std::exception& e) {
    return {MessageType::kError, EncodeError(Error(ErrorCode::kProtocol, e.what()))};
  }
}

// --- sockets ----------------------------------------------------------------------

void Server::Start(std::uint16_t port) {
  if (running()) throw Error(ErrorCode::kStartup, "server already running");
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw Error(ErrorCode::kStartup, "socket: " + std::string(std::strerror(errno)));
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(fd, 64) != 0) {
    const int err = errno;
    ::close(fd);
    throw Error(ErrorCode::kStartup, std::string(RoleName(role_)) +
                                         ": cannot listen on port " +
                                         std::to_string(port) + ": " +
                                         std::strerror(err));
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  listen_fd_ = fd;
  stopping_ = false;
  acceptor_ = std::thread([this] { AcceptLoop(); });
}

void Server::AcceptLoop() {
  while (!stopping_) {
    int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;  // listener shut down
    }
    std::lock_guard lock(conn_mu_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    open_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { Serve(fd); });
  }
}

void Server::Serve(int fd) {
  std::string buffer;
  std::string line;
  try {
    while (detail::ReadLine(fd, buffer, line)) {
      Message reply;
      try {
        reply = Handle(DecodeLine(line));
      } catch (const Error& e) {
        reply = {MessageType::kError, EncodeError(e)};
      }
      detail::WriteAll(fd, EncodeLine(reply) + "\n");
    }
  } catch (const Error&) {
    // Connection-level failure: drop this client only.
  }
  std::lock_guard lock(conn_mu_);
  for (auto it = open_fds_.begin(); it != open_fds_.end(); ++it) {
    if (*it == fd) {
      open_fds_.erase(it);
      ::close(fd);
      break;
    }
  }
}

void Server::Stop() {
  if (!running()) return;
  stopping_ = true;
  ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  listen_fd_ = -1;

  std::list<std::thread> workers;
  {
    std::lock_guard lock(conn_mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

}  // namespace ledgerchat::wire

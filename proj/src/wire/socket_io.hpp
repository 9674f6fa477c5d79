#pragma once

#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <string>
#include <string_view>

#include "ledgerchat/error.hpp"
#include "ledgerchat/wire/protocol.hpp"

namespace ledgerchat::wire::detail {

inline void WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw Error(ErrorCode::kIo, "connection closed while writing");
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

// False on a clean end of stream before any byte of a new line.
inline bool ReadLine(int fd, std::string& buffer, std::string& line) {
  for (;;) {
    auto nl = buffer.find('\n');
    if (nl != std::string::npos) {
      line.assign(buffer, 0, nl);
      buffer.erase(0, nl + 1);
      return true;
    }
    if (buffer.size() > kMaxLineBytes) {
      throw Error(ErrorCode::kProtocol, "line exceeds the size limit");
    }
    char chunk[16384];
    ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) throw Error(ErrorCode::kIo, "read failed");
    if (n == 0) {
      if (buffer.empty()) return false;
      throw Error(ErrorCode::kIo, "connection closed mid-line");
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace ledgerchat::wire::detail

#include <cerrno>
#include <cstring>
#include <string>

#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/mpc/transport.hpp"

namespace tnmpcqep::mpc {
namespace {

std::size_t channel_index(std::uint8_t from, std::uint8_t to) {
  return static_cast<std::size_t>(from) * kEndpoints + to;
}

void set_nonblocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  if (flags < 0 || fcntl(fd, F_SETFL, flags | O_NONBLOCK) < 0) {
    throw ProtocolAbort(std::string("socket transport: fcntl failed: ") + std::strerror(errno));
  }
}

}  // namespace

SocketTransport::SocketTransport() {
  for (int from = 0; from < kEndpoints; ++from) {
    for (int to = 0; to < kEndpoints; ++to) {
      if (from == to || to == kClientEndpoint) continue;
      int fds[2];
      if (socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
        throw ProtocolAbort(std::string("socket transport: socketpair failed: ") +
                            std::strerror(errno));
      }
      set_nonblocking(fds[0]);
      set_nonblocking(fds[1]);
      auto& ch = channels_[channel_index(static_cast<std::uint8_t>(from), static_cast<std::uint8_t>(to))];
      ch.write_fd = fds[0];
      ch.read_fd = fds[1];
    }
  }
}

SocketTransport::~SocketTransport() {
  for (auto& ch : channels_) {
    if (ch.write_fd >= 0) close(ch.write_fd);
    if (ch.read_fd >= 0) close(ch.read_fd);
  }
}

void SocketTransport::deliver(Frame frame) {
  auto& ch = channels_[channel_index(frame.from, frame.to)];
  if (ch.write_fd < 0) throw UsageError("socket transport: channel not available");
  const auto bytes = encode_frame(frame, bits());
  ch.outbox.insert(ch.outbox.end(), bytes.begin(), bytes.end());
  pump(false);
}

bool SocketTransport::pump(bool block) {
  std::vector<pollfd> fds;
  std::vector<Channel*> owners;
  std::vector<bool> is_write;
  for (auto& ch : channels_) {
    if (ch.write_fd < 0) continue;
    if (ch.outbox_sent < ch.outbox.size()) {
      fds.push_back({ch.write_fd, POLLOUT, 0});
      owners.push_back(&ch);
      is_write.push_back(true);
    }
    fds.push_back({ch.read_fd, POLLIN, 0});
    owners.push_back(&ch);
    is_write.push_back(false);
  }
  const int ready = poll(fds.data(), fds.size(), block ? 1000 : 0);
  if (ready < 0) {
    if (errno == EINTR) return true;
    throw ProtocolAbort(std::string("socket transport: poll failed: ") + std::strerror(errno));
  }
  bool progressed = false;
  for (std::size_t i = 0; i < fds.size(); ++i) {
    Channel& ch = *owners[i];
    if (is_write[i] && (fds[i].revents & POLLOUT)) {
      const ssize_t n = ::write(ch.write_fd, ch.outbox.data() + ch.outbox_sent,
                                ch.outbox.size() - ch.outbox_sent);
      if (n > 0) {
        ch.outbox_sent += static_cast<std::size_t>(n);
        bytes_written_ += static_cast<std::uint64_t>(n);
        progressed = true;
        if (ch.outbox_sent == ch.outbox.size()) {
          ch.outbox.clear();
          ch.outbox_sent = 0;
        }
      } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
        throw ProtocolAbort(std::string("socket transport: write failed: ") + std::strerror(errno));
      }
    }
    if (!is_write[i] && (fds[i].revents & POLLIN)) {
      std::uint8_t buf[65536];
      const ssize_t n = ::read(ch.read_fd, buf, sizeof(buf));
      if (n > 0) {
        ch.inbox.insert(ch.inbox.end(), buf, buf + n);
        progressed = true;
      } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
        throw ProtocolAbort(std::string("socket transport: read failed: ") + std::strerror(errno));
      }
    }
  }
  return progressed;
}

std::optional<Frame> SocketTransport::collect(std::uint8_t from, std::uint8_t to) {
  auto& ch = channels_[channel_index(from, to)];
  if (ch.read_fd < 0) return std::nullopt;
  for (;;) {
    if (auto decoded = decode_frame(ch.inbox, bits())) {
      ch.inbox.erase(ch.inbox.begin(), ch.inbox.begin() + static_cast<std::ptrdiff_t>(decoded->consumed));
      return std::move(decoded->frame);
    }
    bool writes_pending = false;
    for (const auto& other : channels_) writes_pending = writes_pending || other.outbox_sent < other.outbox.size();
    if (!pump(writes_pending) && !writes_pending) return std::nullopt;
  }
}

std::unique_ptr<Transport> make_socket_transport() { return std::make_unique<SocketTransport>(); }

}  // namespace tnmpcqep::mpc

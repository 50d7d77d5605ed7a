#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tnmpcqep/mpc/meter.hpp"
#include "tnmpcqep/mpc/wire.hpp"

namespace tnmpcqep::mpc {

/// Ordered point-to-point channels between endpoints {0, 1, 2, client}.
/// Every send of m elements is metered as m * bits on its link:
/// client-originated traffic is ClientToNode, Opcode::Open is
/// Reconstruction, everything else NodeToNode.
class Transport {
 public:
  virtual ~Transport() = default;

  void attach(CostMeter* meter, unsigned bits);
  unsigned bits() const { return bits_; }

  void send(std::uint8_t from, std::uint8_t to, Opcode op, std::span<const ring::Word> payload);
  /// Next message on (from -> to). Throws ProtocolAbort if none is pending or
  /// its opcode is not `expected`.
  std::vector<ring::Word> receive(std::uint8_t from, std::uint8_t to, Opcode expected);

 protected:
  virtual void deliver(Frame frame) = 0;
  virtual std::optional<Frame> collect(std::uint8_t from, std::uint8_t to) = 0;

 private:
  CostMeter* meter_ = nullptr;
  unsigned bits_ = ring::kDefaultBits;
};

/// In-process FIFO queues, one per ordered endpoint pair.
class LocalTransport : public Transport {
 protected:
  void deliver(Frame frame) override;
  std::optional<Frame> collect(std::uint8_t from, std::uint8_t to) override;

 private:
  std::array<std::deque<Frame>, kEndpoints * kEndpoints> queues_;
};

/// Byte-stream transport over AF_UNIX socket pairs, one per ordered endpoint
/// pair, using the framed wire format. Writes are buffered and flushed with
/// poll() while waiting on a receive, so the lockstep scheduler never blocks
/// on a full socket buffer.
class SocketTransport : public Transport {
 public:
  SocketTransport();
  ~SocketTransport() override;
  SocketTransport(const SocketTransport&) = delete;
  SocketTransport& operator=(const SocketTransport&) = delete;

  /// Raw bytes written so far (headers included).
  std::uint64_t bytes_written() const { return bytes_written_; }

 protected:
  void deliver(Frame frame) override;
  std::optional<Frame> collect(std::uint8_t from, std::uint8_t to) override;

 private:
  struct Channel {
    int write_fd = -1;
    int read_fd = -1;
    std::vector<std::uint8_t> outbox;
    std::size_t outbox_sent = 0;
    std::vector<std::uint8_t> inbox;
  };
  bool pump(bool block);

  std::array<Channel, kEndpoints * kEndpoints> channels_;
  std::uint64_t bytes_written_ = 0;
};

std::unique_ptr<Transport> make_local_transport();
std::unique_ptr<Transport> make_socket_transport();

}  // namespace tnmpcqep::mpc

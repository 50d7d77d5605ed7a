#include "tnmpcqep/mpc/transport.hpp"

#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::mpc {
namespace {

std::size_t channel_index(std::uint8_t from, std::uint8_t to) {
  return static_cast<std::size_t>(from) * kEndpoints + to;
}

void check_endpoints(std::uint8_t from, std::uint8_t to) {
  if (from >= kEndpoints || to >= kEndpoints || from == to) {
    throw UsageError("transport: invalid endpoint pair " + std::to_string(from) + "->" +
                     std::to_string(to));
  }
}

}  // namespace

void Transport::attach(CostMeter* meter, unsigned bits) {
  meter_ = meter;
  bits_ = bits;
}

void Transport::send(std::uint8_t from, std::uint8_t to, Opcode op,
                     std::span<const ring::Word> payload) {
  check_endpoints(from, to);
  if (to == kClientEndpoint) throw UsageError("transport: nodes never send to clients");
  if (meter_ != nullptr) {
    Link link = Link::NodeToNode;
    if (from == kClientEndpoint) {
      link = Link::ClientToNode;
    } else if (op == Opcode::Open) {
      link = Link::Reconstruction;
    }
    meter_->record_send(link, static_cast<std::uint64_t>(payload.size()) * bits_);
  }
  deliver(Frame{op, from, to, {payload.begin(), payload.end()}});
}

std::vector<ring::Word> Transport::receive(std::uint8_t from, std::uint8_t to, Opcode expected) {
  check_endpoints(from, to);
  std::optional<Frame> frame = collect(from, to);
  if (!frame) {
    throw ProtocolAbort("transport: no message pending on " + std::to_string(from) + "->" +
                        std::to_string(to));
  }
  if (frame->opcode != expected) {
    throw ProtocolAbort("transport: expected " + std::string(to_string(expected)) + " on " +
                        std::to_string(from) + "->" + std::to_string(to) + ", got " +
                        std::string(to_string(frame->opcode)));
  }
  return std::move(frame->payload);
}

void LocalTransport::deliver(Frame frame) {
  queues_[channel_index(frame.from, frame.to)].push_back(std::move(frame));
}

std::optional<Frame> LocalTransport::collect(std::uint8_t from, std::uint8_t to) {
  auto& q = queues_[channel_index(from, to)];
  if (q.empty()) return std::nullopt;
  Frame f = std::move(q.front());
  q.pop_front();
  return f;
}

std::unique_ptr<Transport> make_local_transport() { return std::make_unique<LocalTransport>(); }

}  // namespace tnmpcqep::mpc

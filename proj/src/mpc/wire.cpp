#include "tnmpcqep/mpc/wire.hpp"

#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::mpc {

std::string_view to_string(Opcode op) {
  switch (op) {
    case Opcode::Upload: return "upload";
    case Opcode::Share: return "share";
    case Opcode::Reshare: return "reshare";
    case Opcode::MaskedOpen: return "masked-open";
    case Opcode::Open: return "open";
  }
  return "unknown";
}

std::size_t element_bytes(unsigned bits) { return (bits + 7) / 8; }

std::vector<std::uint8_t> encode_frame(const Frame& frame, unsigned bits) {
  const std::size_t width = element_bytes(bits);
  const std::size_t payload_bytes = frame.payload.size() * width;
  if (payload_bytes > 0xffffffffULL) throw UsageError("encode_frame: payload too large");
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + payload_bytes);
  const auto len = static_cast<std::uint32_t>(payload_bytes);
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.push_back(static_cast<std::uint8_t>(frame.opcode));
  out.push_back(frame.from);
  out.push_back(frame.to);
  for (ring::Word w : frame.payload) {
    w = ring::wrap(w, bits);
    for (std::size_t b = 0; b < width; ++b) out.push_back(static_cast<std::uint8_t>(w >> (8 * b)));
  }
  return out;
}

std::optional<DecodedFrame> decode_frame(std::span<const std::uint8_t> bytes, unsigned bits) {
  if (bytes.size() < kFrameHeaderBytes) return std::nullopt;
  const std::uint32_t len = (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
                            (std::uint32_t{bytes[2]} << 8) | std::uint32_t{bytes[3]};
  const std::size_t width = element_bytes(bits);
  if (len % width != 0) {
    throw ParseError("decode_frame: payload length " + std::to_string(len) +
                     " is not a multiple of the element width at offset 0");
  }
  if (bytes[4] > static_cast<std::uint8_t>(Opcode::Open)) {
    throw ParseError("decode_frame: unknown opcode at offset 4");
  }
  if (bytes[5] >= kEndpoints || bytes[6] >= kEndpoints) {
    throw ParseError("decode_frame: endpoint id out of range at offset 5");
  }
  if (bytes.size() < kFrameHeaderBytes + len) return std::nullopt;
  DecodedFrame out;
  out.frame.opcode = static_cast<Opcode>(bytes[4]);
  out.frame.from = bytes[5];
  out.frame.to = bytes[6];
  out.frame.payload.resize(len / width);
  const std::uint8_t* p = bytes.data() + kFrameHeaderBytes;
  for (auto& w : out.frame.payload) {
    ring::Word v = 0;
    for (std::size_t b = 0; b < width; ++b) v |= static_cast<ring::Word>(p[b]) << (8 * b);
    w = ring::wrap(v, bits);
    p += width;
  }
  out.consumed = kFrameHeaderBytes + len;
  return out;
}

}  // namespace tnmpcqep::mpc

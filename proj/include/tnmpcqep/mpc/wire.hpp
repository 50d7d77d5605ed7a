#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tnmpcqep/ring.hpp"

namespace tnmpcqep::mpc {

/// Endpoint id used for every external client (nodes are 0, 1, 2).
constexpr std::uint8_t kClientEndpoint = 3;
constexpr int kEndpoints = 4;

enum class Opcode : std::uint8_t {
  Upload = 0,      // plaintext client upload (insecure baseline)
  Share = 1,       // client distributes share components
  Reshare = 2,     // multiplication resharing
  MaskedOpen = 3,  // masked opening inside truncation/division
  Open = 4,        // output reconstruction
};

std::string_view to_string(Opcode op);

struct Frame {
  Opcode opcode = Opcode::Share;
  std::uint8_t from = 0;
  std::uint8_t to = 0;
  std::vector<ring::Word> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Bytes per ring element on the wire: ceil(bits / 8).
std::size_t element_bytes(unsigned bits);

/// [u32 BE payload length][u8 opcode][u8 from][u8 to][payload], where the
/// payload is the concatenation of little-endian ring elements.
std::vector<std::uint8_t> encode_frame(const Frame& frame, unsigned bits);

struct DecodedFrame {
  Frame frame;
  std::size_t consumed = 0;
};

/// Decode one frame from the front of `bytes`. Returns nullopt when the buffer
/// does not yet hold a complete frame. Throws ParseError on malformed input.
std::optional<DecodedFrame> decode_frame(std::span<const std::uint8_t> bytes, unsigned bits);

constexpr std::size_t kFrameHeaderBytes = 7;

}  // namespace tnmpcqep::mpc

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace khopnet {

enum class MessageKind : std::uint8_t {
  Elect = 0,        // E: start of an elect-me cycle
  Stop = 1,         // S: reply from a node of equal or higher priority
  IAmHead = 2,      // IAMC: cluster head announcement, also used as beacon
  Quit = 3,         // Q: cluster head stepping down
  Solicit = 4,      // boot-time cluster solicitation
  SolicitReply = 5,
  Accept = 6,
};

std::string_view tag(MessageKind kind);
std::optional<MessageKind> kind_from_tag(std::string_view tag);

/// Protocol datagram. `serve_time` is in minutes.
struct Message {
  MessageKind kind = MessageKind::Elect;
  int sender = 0;
  double priority = 0.0;
  double serve_time = 0.0;
  std::optional<int> cluster_head;
  std::optional<int> hop_distance;
  std::optional<double> residual_energy;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Wire layout, little endian:
///   kind       1 byte  (low 3 bits kind, bits 5..7 flag the optional fields)
///   sender     4 bytes
///   priority   8 bytes (IEEE double)
///   serve_time 4 bytes (IEEE float, minutes)
///   cluster_head 4, hop_distance 4, residual_energy 8 -- only when present
inline constexpr std::size_t kMessageHeaderBytes = 17;

std::size_t encoded_size(const Message& msg);
std::vector<std::byte> encode(const Message& msg);
/// Inverse of encode(). serve_time comes back rounded to float precision.
Message decode(std::span<const std::byte> bytes);

}  // namespace khopnet

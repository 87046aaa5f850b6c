#include "khopnet/message.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "khopnet/error.hpp"

namespace khopnet {

namespace {

constexpr std::array<std::string_view, 7> kTags = {"E",       "S",             "IAMC",  "Q",
                                                   "SOLICIT", "SOLICIT_REPLY", "ACCEPT"};

constexpr std::uint8_t kHasHead = 1u << 5;
constexpr std::uint8_t kHasHop = 1u << 6;
constexpr std::uint8_t kHasEnergy = 1u << 7;
constexpr std::uint8_t kKindMask = 0x07;

template <typename T>
void put(std::vector<std::byte>& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  std::array<std::byte, sizeof(T)> raw;
  std::memcpy(raw.data(), &value, sizeof(T));
  out.insert(out.end(), raw.begin(), raw.end());
}

template <typename T>
T take(std::span<const std::byte>& in) {
  if (in.size() < sizeof(T)) throw Error("truncated message");
  T value;
  std::memcpy(&value, in.data(), sizeof(T));
  in = in.subspan(sizeof(T));
  return value;
}

}  // namespace

std::string_view tag(MessageKind kind) { return kTags.at(static_cast<std::size_t>(kind)); }

std::optional<MessageKind> kind_from_tag(std::string_view text) {
  for (std::size_t i = 0; i < kTags.size(); ++i) {
    if (kTags[i] == text) return static_cast<MessageKind>(i);
  }
  return std::nullopt;
}

std::size_t encoded_size(const Message& msg) {
  std::size_t size = kMessageHeaderBytes;
  if (msg.cluster_head) size += 4;
  if (msg.hop_distance) size += 4;
  if (msg.residual_energy) size += 8;
  return size;
}

std::vector<std::byte> encode(const Message& msg) {
  std::vector<std::byte> out;
  out.reserve(encoded_size(msg));
  std::uint8_t head = static_cast<std::uint8_t>(msg.kind) & kKindMask;
  if (msg.cluster_head) head |= kHasHead;
  if (msg.hop_distance) head |= kHasHop;
  if (msg.residual_energy) head |= kHasEnergy;
  put(out, head);
  put(out, static_cast<std::int32_t>(msg.sender));
  put(out, msg.priority);
  put(out, static_cast<float>(msg.serve_time));
  if (msg.cluster_head) put(out, static_cast<std::int32_t>(*msg.cluster_head));
  if (msg.hop_distance) put(out, static_cast<std::int32_t>(*msg.hop_distance));
  if (msg.residual_energy) put(out, *msg.residual_energy);
  return out;
}

Message decode(std::span<const std::byte> bytes) {
  Message msg;
  auto head = take<std::uint8_t>(bytes);
  const std::size_t kind = head & kKindMask;
  if (kind >= kTags.size()) throw Error("unknown message kind " + std::to_string(kind));
  msg.kind = static_cast<MessageKind>(kind);
  msg.sender = take<std::int32_t>(bytes);
  msg.priority = take<double>(bytes);
  msg.serve_time = take<float>(bytes);
  if (head & kHasHead) msg.cluster_head = take<std::int32_t>(bytes);
  if (head & kHasHop) msg.hop_distance = take<std::int32_t>(bytes);
  if (head & kHasEnergy) msg.residual_energy = take<double>(bytes);
  if (!bytes.empty()) throw Error("trailing bytes after message");
  return msg;
}

}  // namespace khopnet

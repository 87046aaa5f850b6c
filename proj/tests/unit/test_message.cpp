#include <doctest.h>

#include "khopnet/message.hpp"

using namespace khopnet;

TEST_SUITE("message") {

TEST_CASE("encoded sizes") {
  Message m;
  m.kind = MessageKind::Elect;
  CHECK(encoded_size(m) == 17);
  m.hop_distance = 2;
  CHECK(encoded_size(m) == 21);
  m.cluster_head = 3;
  m.residual_energy = 0.5;
  CHECK(encoded_size(m) == 33);
  CHECK(encode(m).size() == encoded_size(m));
}

TEST_CASE("round trip for every kind") {
  for (auto kind : {MessageKind::Elect, MessageKind::Stop, MessageKind::IAmHead,
                    MessageKind::Quit, MessageKind::Solicit, MessageKind::SolicitReply,
                    MessageKind::Accept}) {
    Message m;
    m.kind = kind;
    m.sender = 42;
    m.priority = 33.75;
    m.serve_time = 12;
    m.residual_energy = 0.25;
    const auto back = decode(encode(m));
    CHECK(back.kind == kind);
    CHECK(back.sender == 42);
    CHECK(back.priority == 33.75);
    CHECK(back.serve_time == 12);
    CHECK_FALSE(back.cluster_head);
    CHECK(back.residual_energy == 0.25);
    CHECK(kind_from_tag(tag(kind)) == kind);
  }
}

TEST_CASE("decode rejects malformed input") {
  Message m;
  auto bytes = encode(m);
  bytes.pop_back();
  CHECK_THROWS(decode(bytes));
  bytes = encode(m);
  bytes.push_back(std::byte{0});
  CHECK_THROWS(decode(bytes));
  CHECK_FALSE(kind_from_tag("X"));
}

TEST_CASE("tags") {
  CHECK(tag(MessageKind::IAmHead) == "IAMC");
  CHECK(tag(MessageKind::Quit) == "Q");
  CHECK(tag(MessageKind::Stop) == "S");
}

}

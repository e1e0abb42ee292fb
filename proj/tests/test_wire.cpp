// Copyright 2026 The corebench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "corebench/corenet/work.hpp"
#include "corebench/hex.hpp"
#include "corebench/wire.hpp"

using namespace corebench;

namespace {

Frame random_frame(std::mt19937_64& rng) {
  static const char* kTypes[] = {msg::kRegistrationRequest, msg::kAuthRequest,
                                 msg::kSubscriberGet, msg::kCreateSmContext,
                                 msg::kPolicyGet, msg::kTunnelSetup};
  std::uniform_int_distribution<std::size_t> td(0, 5);
  std::uniform_int_distribution<int> len(0, 64);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> nhops(0, 5);
  Frame f;
  f.msg_type = kTypes[td(rng)];
  f.txn_id = rng();
  f.ue_id = "ue-" + std::to_string(rng() % 1000000);
  const std::size_t h = nhops(rng);
  for (std::size_t i = 0; i < h; ++i) {
    f.hops.push_back(static_cast<NfKind>(rng() % kNfCount));
  }
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    f.payload.push_back(static_cast<std::uint8_t>(byte(rng)));
  }
  return f;
}

}  // namespace

TEST_CASE("hex encode/decode") {
  const std::vector<std::uint8_t> bytes = {0xDE, 0xAD};
  CHECK(hex_encode(bytes) == "dead");
  CHECK(hex_decode("dead") == bytes);
  CHECK(hex_encode({}) == "");
  CHECK_THROWS_AS(hex_decode("abc"), std::invalid_argument);
  CHECK_THROWS_AS(hex_decode("zz"), std::invalid_argument);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> len(0, 200);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> data;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      data.push_back(static_cast<std::uint8_t>(byte(rng)));
    }
    const std::string h = hex_encode(data);
    CHECK(h.size() == 2 * data.size());
    CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(hex_decode(h) == data);
  }
}

TEST_CASE("frame round trip") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const Frame f = random_frame(rng);
    const auto body = encode_frame_body(f);
    const Frame g = decode_frame_body(body);
    CHECK(g == f);
  }
}

TEST_CASE("frame wire form carries the exact key set") {
  Frame f;
  f.msg_type = msg::kRegistrationRequest;
  f.txn_id = 42;
  f.ue_id = "ue-000001";
  f.hops = {NfKind::AMF, NfKind::AUSF};
  f.payload = {0xDE, 0xAD};
  const auto body = encode_frame_body(f);
  const std::string s(body.begin(), body.end());
  for (const char* key :
       {"\"msg_type\"", "\"txn_id\"", "\"ue_id\"", "\"hops\"",
        "\"payload_hex\""}) {
    CHECK(s.find(key) != std::string::npos);
  }
  CHECK(s.find("\"dead\"") != std::string::npos);
  CHECK(s.find("\"AMF\"") != std::string::npos);

  // 4-byte big-endian prefix that excludes itself.
  const auto wire = encode_frame(f);
  REQUIRE(wire.size() == body.size() + 4);
  const std::size_t n = body.size();
  CHECK(wire[0] == ((n >> 24) & 0xff));
  CHECK(wire[1] == ((n >> 16) & 0xff));
  CHECK(wire[2] == ((n >> 8) & 0xff));
  CHECK(wire[3] == (n & 0xff));
}

TEST_CASE("decode rejects malformed bodies") {
  const std::string bad = "{\"msg_type\": 17}";
  CHECK_THROWS_AS(
      decode_frame_body(std::vector<std::uint8_t>(bad.begin(), bad.end())),
      WireError);
  const std::string junk = "not json at all";
  CHECK_THROWS_AS(
      decode_frame_body(std::vector<std::uint8_t>(junk.begin(), junk.end())),
      WireError);
}

TEST_CASE("byte_mix is deterministic and input-sensitive") {
  const std::vector<std::uint8_t> p1 = {1, 2, 3, 4};
  const std::vector<std::uint8_t> p2 = {1, 2, 3, 5};
  CHECK(byte_mix(p1, 10000) == byte_mix(p1, 10000));
  CHECK(byte_mix(p1, 10000) != byte_mix(p2, 10000));
  CHECK(byte_mix(p1, 10000) != byte_mix(p1, 10001));
  CHECK(byte_mix({}, 100) == byte_mix({}, 100));  // empty payload is legal
}

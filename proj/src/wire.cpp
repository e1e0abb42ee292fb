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

#include "corebench/wire.hpp"

#include <cstring>

#include "corebench/hex.hpp"
#include "json.hpp"

namespace corebench {

std::vector<std::uint8_t> encode_frame_body(const Frame& f) {
  nlohmann::json j;
  j["msg_type"] = f.msg_type;
  j["txn_id"] = f.txn_id;
  j["ue_id"] = f.ue_id;
  auto hops = nlohmann::json::array();
  for (NfKind k : f.hops) hops.push_back(std::string(to_string(k)));
  j["hops"] = std::move(hops);
  j["payload_hex"] = hex_encode(f.payload);
  const std::string s = j.dump();
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

Frame decode_frame_body(std::span<const std::uint8_t> body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body.begin(), body.end());
  } catch (const nlohmann::json::exception& e) {
    throw WireError(std::string("frame body is not valid JSON: ") + e.what());
  }
  try {
    Frame f;
    f.msg_type = j.at("msg_type").get<std::string>();
    f.txn_id = j.at("txn_id").get<std::uint64_t>();
    f.ue_id = j.at("ue_id").get<std::string>();
    for (const auto& h : j.at("hops")) {
      auto kind = parse_nf_kind(h.get<std::string>());
      if (!kind) throw WireError("unknown hop kind");
      f.hops.push_back(*kind);
    }
    f.payload = hex_decode(j.at("payload_hex").get<std::string>());
    return f;
  } catch (const WireError&) {
    throw;
  } catch (const std::exception& e) {
    throw WireError(std::string("frame body has bad fields: ") + e.what());
  }
}

std::vector<std::uint8_t> encode_frame(const Frame& f) {
  const auto body = encode_frame_body(f);
  std::vector<std::uint8_t> out;
  out.reserve(4 + body.size());
  const auto n = static_cast<std::uint32_t>(body.size());
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

void send_frame(Socket& s, const Frame& f, int timeout_ms) {
  const auto wire = encode_frame(f);
  s.write_all(wire, timeout_ms);
}

RecvResult recv_frame(Socket& s, int timeout_ms) {
  RecvResult r;
  std::uint8_t len_buf[4];
  if (!s.read_exact(len_buf, timeout_ms)) {
    r.status = RecvStatus::Eof;
    return r;
  }
  const std::uint32_t n = (std::uint32_t(len_buf[0]) << 24) |
                          (std::uint32_t(len_buf[1]) << 16) |
                          (std::uint32_t(len_buf[2]) << 8) |
                          std::uint32_t(len_buf[3]);
  if (n > kMaxFrameBytes) {
    r.status = RecvStatus::Oversize;
    return r;
  }
  r.raw_body.resize(n);
  if (!s.read_exact(r.raw_body, timeout_ms)) {
    throw NetError("read: truncated frame");
  }
  try {
    r.frame = decode_frame_body(r.raw_body);
    r.status = RecvStatus::Ok;
  } catch (const WireError&) {
    r.status = RecvStatus::BadJson;
  }
  return r;
}

Frame request_reply(Socket& s, const Frame& f, int timeout_ms) {
  send_frame(s, f, timeout_ms);
  RecvResult r = recv_frame(s, timeout_ms);
  if (r.status != RecvStatus::Ok) {
    throw NetError("request_reply: no valid reply");
  }
  return std::move(r.frame);
}

bool is_error_reply(const std::string& msg_type) {
  return msg_type == msg::kUpstreamUnavailable ||
         msg_type == msg::kMalformedFrame || msg_type == msg::kError;
}

}  // namespace corebench

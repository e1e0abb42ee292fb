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

#ifndef COREBENCH_WIRE_HPP_
#define COREBENCH_WIRE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "corebench/net.hpp"
#include "corebench/nf_kind.hpp"

namespace corebench {

// Wire format: 4-byte big-endian length prefix (excluding itself) followed
// by a UTF-8 JSON body with keys msg_type, txn_id, ue_id, hops, payload_hex.

inline constexpr std::size_t kMaxFrameBytes = 1 << 20;

struct Frame {
  std::string msg_type;
  std::uint64_t txn_id = 0;
  std::string ue_id;
  std::vector<NfKind> hops;
  std::vector<std::uint8_t> payload;

  bool operator==(const Frame&) const = default;
};

namespace msg {
// Registration path.
inline constexpr const char* kRegistrationRequest = "REGISTRATION_REQUEST";
inline constexpr const char* kRegistrationAccept = "REGISTRATION_ACCEPT";
inline constexpr const char* kRegistrationReject = "REGISTRATION_REJECT";
inline constexpr const char* kAuthRequest = "AUTH_REQUEST";
inline constexpr const char* kAuthReply = "AUTH_REPLY";
inline constexpr const char* kAuthReject = "AUTH_REJECT";
inline constexpr const char* kAuthVectorGet = "AUTH_VECTOR_GET";
inline constexpr const char* kAuthVectorReply = "AUTH_VECTOR_REPLY";
inline constexpr const char* kAuthVectorReject = "AUTH_VECTOR_REJECT";
inline constexpr const char* kSubscriberGet = "SUBSCRIBER_GET";
inline constexpr const char* kSubscriberReply = "SUBSCRIBER_REPLY";
inline constexpr const char* kSubscriberReject = "SUBSCRIBER_REJECT";
// PDU session path.
inline constexpr const char* kPduSessionRequest = "PDU_SESSION_REQUEST";
inline constexpr const char* kPduSessionAccept = "PDU_SESSION_ACCEPT";
inline constexpr const char* kPduSessionReject = "PDU_SESSION_REJECT";
inline constexpr const char* kCreateSmContext = "CREATE_SM_CONTEXT";
inline constexpr const char* kCreateSmContextAccept = "CREATE_SM_CONTEXT_ACCEPT";
inline constexpr const char* kCreateSmContextReject = "CREATE_SM_CONTEXT_REJECT";
inline constexpr const char* kSmSubscriptionGet = "SM_SUBSCRIPTION_GET";
inline constexpr const char* kSmSubscriptionReply = "SM_SUBSCRIPTION_REPLY";
inline constexpr const char* kPolicyGet = "POLICY_GET";
inline constexpr const char* kPolicyReply = "POLICY_REPLY";
inline constexpr const char* kTunnelSetup = "TUNNEL_SETUP";
inline constexpr const char* kTunnelSetupAccept = "TUNNEL_SETUP_ACCEPT";
// NRF registry (startup only).
inline constexpr const char* kNfRegister = "NF_REGISTER";
inline constexpr const char* kNfRegisterAccept = "NF_REGISTER_ACCEPT";
inline constexpr const char* kNfDiscover = "NF_DISCOVER";
inline constexpr const char* kNfDiscoverReply = "NF_DISCOVER_REPLY";
// Control channel.
inline constexpr const char* kPing = "PING";
inline constexpr const char* kPong = "PONG";
inline constexpr const char* kProvision = "PROVISION";
inline constexpr const char* kProvisionAck = "PROVISION_ACK";
inline constexpr const char* kStressStart = "STRESS_START";
inline constexpr const char* kStressStartAck = "STRESS_START_ACK";
inline constexpr const char* kStressStop = "STRESS_STOP";
inline constexpr const char* kStressStopAck = "STRESS_STOP_ACK";
inline constexpr const char* kStatsGet = "STATS_GET";
inline constexpr const char* kStatsReply = "STATS_REPLY";
inline constexpr const char* kCaptureStart = "CAPTURE_START";
inline constexpr const char* kCaptureStartAck = "CAPTURE_START_ACK";
inline constexpr const char* kCaptureStop = "CAPTURE_STOP";
inline constexpr const char* kCaptureStopAck = "CAPTURE_STOP_ACK";
inline constexpr const char* kShutdown = "SHUTDOWN";
inline constexpr const char* kShutdownAck = "SHUTDOWN_ACK";
// Errors.
inline constexpr const char* kUpstreamUnavailable = "UPSTREAM_UNAVAILABLE";
inline constexpr const char* kMalformedFrame = "MALFORMED_FRAME";
inline constexpr const char* kError = "ERROR";
}  // namespace msg

struct WireError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// JSON body bytes (no length prefix).
std::vector<std::uint8_t> encode_frame_body(const Frame& f);

/// Throws WireError on malformed JSON / wrong field types.
Frame decode_frame_body(std::span<const std::uint8_t> body);

/// Length-prefixed frame, ready to put on the wire.
std::vector<std::uint8_t> encode_frame(const Frame& f);

void send_frame(Socket& s, const Frame& f, int timeout_ms);

enum class RecvStatus {
  Ok,
  Eof,       // clean close before a length prefix
  Oversize,  // length prefix exceeds kMaxFrameBytes; stream unrecoverable
  BadJson,   // well-framed but undecodable body; stream still usable
};

struct RecvResult {
  RecvStatus status = RecvStatus::Eof;
  Frame frame;
  std::vector<std::uint8_t> raw_body;  // as read, for capture mirroring
};

/// Reads one frame. Throws NetError on timeout/reset/truncation.
RecvResult recv_frame(Socket& s, int timeout_ms);

/// Round trip: send request, await one reply on the same connection.
Frame request_reply(Socket& s, const Frame& f, int timeout_ms);

/// True for the error-reply message types.
bool is_error_reply(const std::string& msg_type);

}  // namespace corebench

#endif  // COREBENCH_WIRE_HPP_

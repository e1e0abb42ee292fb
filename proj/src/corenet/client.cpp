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

#include "corebench/corenet/client.hpp"

#include "corebench/time_util.hpp"

namespace corebench {

std::string_view to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::Accept:
      return "accept";
    case FlowStatus::Reject:
      return "reject";
    case FlowStatus::Error:
      return "error";
    case FlowStatus::Timeout:
      return "timeout";
  }
  return "?";
}

UeClient::UeClient(std::uint16_t amf_port, int timeout_ms)
    : amf_port_(amf_port), timeout_ms_(timeout_ms) {}

FlowResult UeClient::run_flow(const char* request_type,
                              const std::string& ue_id, std::uint64_t txn_id,
                              std::vector<std::uint8_t> payload) {
  FlowResult res;
  const std::int64_t t0 = now_mono_ns();
  const auto deadline_left = [&]() -> int {
    const std::int64_t left =
        timeout_ms_ - (now_mono_ns() - t0) / 1'000'000;
    return left > 0 ? static_cast<int>(left) : 0;
  };
  const auto finish = [&](FlowStatus status, std::string final_type,
                          std::vector<NfKind> hops) {
    res.status = status;
    res.final_msg_type = std::move(final_type);
    res.hops = std::move(hops);
    res.latency_ms = ns_to_ms(now_mono_ns() - t0);
    return res;
  };

  Frame req;
  req.msg_type = request_type;
  req.txn_id = txn_id;
  req.ue_id = ue_id;
  req.payload = std::move(payload);
  try {
    if (!sock_.valid()) sock_ = tcp_connect(amf_port_, deadline_left());
    send_frame(sock_, req, deadline_left());
    const RecvResult r = recv_frame(sock_, deadline_left());
    if (r.status != RecvStatus::Ok) {
      sock_.close_fd();
      return finish(FlowStatus::Error, "CONNECTION_LOST", {});
    }
    FlowStatus status;
    if (r.frame.msg_type == msg::kRegistrationAccept ||
        r.frame.msg_type == msg::kPduSessionAccept) {
      status = FlowStatus::Accept;
    } else if (r.frame.msg_type == msg::kRegistrationReject ||
               r.frame.msg_type == msg::kPduSessionReject) {
      status = FlowStatus::Reject;
    } else {
      status = FlowStatus::Error;
    }
    return finish(status, r.frame.msg_type, r.frame.hops);
  } catch (const NetError& e) {
    sock_.close_fd();
    const bool timed_out = std::string_view(e.what()).find("timeout") !=
                           std::string_view::npos;
    return finish(timed_out ? FlowStatus::Timeout : FlowStatus::Error,
                  timed_out ? "FLOW_TIMEOUT" : "CONNECTION_ERROR", {});
  }
}

FlowResult UeClient::registration_flow(const std::string& ue_id,
                                       std::uint64_t txn_id,
                                       std::vector<std::uint8_t> payload) {
  return run_flow(msg::kRegistrationRequest, ue_id, txn_id,
                  std::move(payload));
}

FlowResult UeClient::pdu_session_flow(const std::string& ue_id,
                                      std::uint64_t txn_id,
                                      std::vector<std::uint8_t> payload) {
  return run_flow(msg::kPduSessionRequest, ue_id, txn_id, std::move(payload));
}

}  // namespace corebench

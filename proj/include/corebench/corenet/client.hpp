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

#ifndef COREBENCH_CORENET_CLIENT_HPP_
#define COREBENCH_CORENET_CLIENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "corebench/net.hpp"
#include "corebench/nf_kind.hpp"
#include "corebench/wire.hpp"

namespace corebench {

enum class FlowStatus {
  Accept,
  Reject,   // well-formed rejection (unknown/unregistered subscriber)
  Error,    // error reply or broken connection (infrastructure failure)
  Timeout,  // flow deadline exceeded
};

std::string_view to_string(FlowStatus s);

struct FlowResult {
  FlowStatus status = FlowStatus::Error;
  std::string final_msg_type;
  std::vector<NfKind> hops;
  double latency_ms = 0.0;
};

/// UE-side driver for the two transaction flows. One TCP connection to the
/// AMF, reused across the registration and session phases of a transaction.
/// Not thread-safe; the sensor gives each in-flight transaction its own
/// client.
class UeClient {
 public:
  explicit UeClient(std::uint16_t amf_port, int timeout_ms = 5000);

  /// UE -> AMF -> AUSF -> UDM -> UDR round trip.
  FlowResult registration_flow(const std::string& ue_id, std::uint64_t txn_id,
                               std::vector<std::uint8_t> payload);

  /// UE -> AMF -> SMF -> {UDM, PCF, UPF} round trip. Requires a prior
  /// successful registration for the ue_id.
  FlowResult pdu_session_flow(const std::string& ue_id, std::uint64_t txn_id,
                              std::vector<std::uint8_t> payload);

 private:
  FlowResult run_flow(const char* request_type, const std::string& ue_id,
                      std::uint64_t txn_id, std::vector<std::uint8_t> payload);

  std::uint16_t amf_port_;
  int timeout_ms_;
  Socket sock_;
};

}  // namespace corebench

#endif  // COREBENCH_CORENET_CLIENT_HPP_

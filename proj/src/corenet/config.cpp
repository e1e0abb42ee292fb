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

#include "corebench/corenet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace corebench {

namespace {

nlohmann::json config_to_json(const NfConfig& c) {
  return {
      {"kind", std::string(to_string(c.kind))},
      {"listen_port", c.listen_port},
      {"work_units", c.work_units},
      {"store_size", c.store_size},
      {"upstream_timeout_ms", c.upstream_timeout_ms},
  };
}

NfConfig config_from_json(const nlohmann::json& j) {
  NfConfig c;
  const auto kind = parse_nf_kind(j.at("kind").get<std::string>());
  if (!kind) {
    throw std::invalid_argument("topology: unknown nf kind " +
                                j.at("kind").get<std::string>());
  }
  c.kind = *kind;
  c.listen_port = j.at("listen_port").get<std::uint16_t>();
  c.work_units = j.value("work_units", std::uint64_t{0});
  c.store_size = j.value("store_size", std::size_t{0});
  c.upstream_timeout_ms = j.value("upstream_timeout_ms", 4000);
  return c;
}

}  // namespace

bool Topology::has(NfKind kind) const {
  for (const auto& c : nfs) {
    if (c.kind == kind) return true;
  }
  return false;
}

const NfConfig& Topology::get(NfKind kind) const {
  for (const auto& c : nfs) {
    if (c.kind == kind) return c;
  }
  throw std::out_of_range("topology: no " + std::string(to_string(kind)));
}

std::optional<std::uint16_t> Topology::port_of(NfKind kind) const {
  for (const auto& c : nfs) {
    if (c.kind == kind) return c.listen_port;
  }
  return std::nullopt;
}

Topology Topology::standard(std::uint16_t port_base, std::uint64_t work_units,
                            std::size_t store_size) {
  Topology t;
  for (NfKind k : kAllNfKinds) {
    NfConfig c;
    c.kind = k;
    c.listen_port = default_nf_port(k, port_base);
    // The AMF is the front door: registration management, UE context and
    // session brokering make it the costliest NF per handled frame, so the
    // default service-cost profile weights it above the rest.
    c.work_units = k == NfKind::AMF ? work_units + work_units / 2 : work_units;
    c.store_size = k == NfKind::UDR ? store_size : 0;
    t.nfs.push_back(c);
  }
  return t;
}

void Topology::validate() const {
  std::set<NfKind> kinds;
  std::set<std::uint16_t> ports;
  for (const auto& c : nfs) {
    if (!kinds.insert(c.kind).second) {
      throw std::invalid_argument("topology: duplicate nf " +
                                  std::string(to_string(c.kind)));
    }
    if (!ports.insert(c.listen_port).second) {
      throw std::invalid_argument("topology: duplicate port " +
                                  std::to_string(c.listen_port));
    }
  }
  const bool full = has(NfKind::AMF) && has(NfKind::UDM) && has(NfKind::UDR);
  if (full && get(NfKind::AMF).work_units == 0 &&
      get(NfKind::UDM).work_units == 0 && get(NfKind::UDR).work_units == 0) {
    throw std::invalid_argument(
        "topology: work_units must be positive on at least one of "
        "AMF/UDM/UDR");
  }
}

std::string Topology::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : nfs) arr.push_back(config_to_json(c));
  return arr.dump(2);
}

Topology Topology::from_json(const std::string& text) {
  Topology t;
  const auto j = nlohmann::json::parse(text);
  for (const auto& item : j) t.nfs.push_back(config_from_json(item));
  return t;
}

Topology Topology::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("topology: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void Topology::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("topology: cannot write " + path);
  out << to_json() << "\n";
}

}  // namespace corebench

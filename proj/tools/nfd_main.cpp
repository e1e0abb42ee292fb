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

// corebench-nfd: hosts exactly one network function. Spawned by the
// launcher (or by `corebench core up`); prints READY or "ERROR: ..." as its
// first stdout line so the parent can gate on startup.

#include <csignal>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "corebench/corenet/server.hpp"
#include "corebench/time_util.hpp"
#include "json.hpp"

namespace {

volatile std::sig_atomic_t g_signal = 0;

void on_signal(int) { g_signal = 1; }

}  // namespace

int main(int argc, char** argv) {
  std::string config_text;
  for (int i = 1; i < argc - 1; ++i) {
    if (std::strcmp(argv[i], "--config") == 0) {
      config_text = argv[i + 1];
    } else if (std::strcmp(argv[i], "--config-file") == 0) {
      std::ifstream in(argv[i + 1]);
      std::stringstream ss;
      ss << in.rdbuf();
      config_text = ss.str();
    }
  }
  if (config_text.empty()) {
    std::printf("ERROR: missing --config\n");
    return 2;
  }

  try {
    const auto j = nlohmann::json::parse(config_text);
    corebench::Topology topo;
    for (const auto& item : j.at("topology")) {
      topo.nfs.push_back(corebench::Topology::from_json(
          nlohmann::json::array({item}).dump()).nfs.at(0));
    }
    const auto& jn = j.at("nf");
    corebench::NfConfig cfg;
    const auto kind =
        corebench::parse_nf_kind(jn.at("kind").get<std::string>());
    if (!kind) {
      std::printf("ERROR: unknown nf kind\n");
      return 2;
    }
    cfg.kind = *kind;
    cfg.listen_port = jn.at("listen_port").get<std::uint16_t>();
    cfg.work_units = jn.value("work_units", std::uint64_t{0});
    cfg.store_size = jn.value("store_size", std::size_t{0});
    cfg.upstream_timeout_ms = jn.value("upstream_timeout_ms", 4000);

    corebench::NfServer server(cfg, topo);
    server.start();
    std::printf("READY\n");
    std::fflush(stdout);

    std::signal(SIGTERM, on_signal);
    std::signal(SIGINT, on_signal);
    while (g_signal == 0 && !server.stop_requested()) {
      corebench::sleep_ms(100);
    }
    server.stop();
    return 0;
  } catch (const std::exception& e) {
    std::printf("ERROR: %s\n", e.what());
    std::fflush(stdout);
    return 1;
  }
}

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

#include "corebench/telemetry/monitor.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <optional>

#include "corebench/net.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"
#include "json.hpp"

namespace corebench {

std::int64_t proc_cpu_ns(pid_t pid) {
  char path[64];
  std::snprintf(path, sizeof(path), "/proc/%d/stat", pid);
  std::ifstream in(path);
  if (!in) return -1;
  std::string all;
  std::getline(in, all);
  // Field 2 (comm) may contain spaces; skip past the closing paren.
  const auto close = all.rfind(')');
  if (close == std::string::npos) return -1;
  std::istringstream rest(all.substr(close + 2));
  std::string tok;
  // Fields 3..13 precede utime (field 14) and stime (field 15).
  for (int i = 3; i <= 13; ++i) rest >> tok;
  std::uint64_t utime = 0, stime = 0;
  rest >> utime >> stime;
  const long hz = sysconf(_SC_CLK_TCK);
  if (hz <= 0) return -1;
  return static_cast<std::int64_t>((utime + stime) *
                                   (1'000'000'000ULL / static_cast<std::uint64_t>(hz)));
}

std::uint64_t proc_rss_bytes(pid_t pid) {
  char path[64];
  std::snprintf(path, sizeof(path), "/proc/%d/statm", pid);
  std::ifstream in(path);
  if (!in) return 0;
  std::uint64_t size_pages = 0, rss_pages = 0;
  in >> size_pages >> rss_pages;
  return rss_pages * static_cast<std::uint64_t>(sysconf(_SC_PAGESIZE));
}

namespace {

struct NetCounters {
  std::uint64_t rx = 0;
  std::uint64_t tx = 0;
};

std::optional<NetCounters> fetch_net_counters(std::uint16_t port) {
  try {
    Socket s = tcp_connect(port, 300);
    Frame f;
    f.msg_type = msg::kStatsGet;
    const Frame r = request_reply(s, f, 500);
    if (r.msg_type != msg::kStatsReply) return std::nullopt;
    const auto j = nlohmann::json::parse(r.payload.begin(), r.payload.end());
    NetCounters n;
    n.rx = j.at("net_rx_bytes").get<std::uint64_t>();
    n.tx = j.at("net_tx_bytes").get<std::uint64_t>();
    return n;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

ResourceMonitor::~ResourceMonitor() {
  if (running_.load()) stop();
}

void ResourceMonitor::start(std::vector<MonitorTarget> targets,
                            int interval_ms) {
  if (running_.exchange(true)) {
    throw std::runtime_error("monitor already running");
  }
  targets_ = std::move(targets);
  interval_ms_ = interval_ms;
  stop_flag_.store(false);
  samples_.clear();
  thread_ = std::thread([this] { loop(); });
}

std::vector<ResourceSample> ResourceMonitor::stop() {
  stop_flag_.store(true);
  if (thread_.joinable()) thread_.join();
  running_.store(false);
  return std::move(samples_);
}

void ResourceMonitor::loop() {
  struct State {
    std::int64_t cpu_ns = -1;
    NetCounters net;
    bool gone = false;
  };
  std::vector<State> states(targets_.size());
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    states[i].cpu_ns = proc_cpu_ns(targets_[i].pid);
    if (const auto n = fetch_net_counters(targets_[i].port)) {
      states[i].net = *n;
    }
  }
  std::int64_t prev_ts = now_mono_ns();
  std::int64_t next_tick = prev_ts + interval_ms_ * 1'000'000LL;

  while (!stop_flag_.load()) {
    while (now_mono_ns() < next_tick && !stop_flag_.load()) {
      sleep_ms(std::min<std::int64_t>(
          20, (next_tick - now_mono_ns()) / 1'000'000 + 1));
    }
    if (stop_flag_.load()) break;
    const std::int64_t ts = now_mono_ns();
    const double dt_s = static_cast<double>(ts - prev_ts) / 1e9;
    for (std::size_t i = 0; i < targets_.size(); ++i) {
      auto& st = states[i];
      if (st.gone) continue;
      ResourceSample s;
      s.ts_ns = ts;
      s.nf = targets_[i].kind;
      const std::int64_t cpu = proc_cpu_ns(targets_[i].pid);
      if (cpu < 0) {
        s.alive = false;
        s.net_rx_bytes = st.net.rx;
        s.net_tx_bytes = st.net.tx;
        st.gone = true;
        samples_.push_back(s);
        continue;
      }
      s.cpu_pct = st.cpu_ns >= 0 && dt_s > 0.0
                      ? 100.0 * static_cast<double>(cpu - st.cpu_ns) / 1e9 / dt_s
                      : 0.0;
      st.cpu_ns = cpu;
      s.rss_bytes = proc_rss_bytes(targets_[i].pid);
      if (const auto n = fetch_net_counters(targets_[i].port)) {
        st.net = *n;
      }
      s.net_rx_bytes = st.net.rx;
      s.net_tx_bytes = st.net.tx;
      samples_.push_back(s);
    }
    prev_ts = ts;
    next_tick += interval_ms_ * 1'000'000LL;
    if (next_tick < ts) next_tick = ts + interval_ms_ * 1'000'000LL;
  }
}

void write_resource_csv(const std::string& path,
                        const std::vector<ResourceSample>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "ts_ns,nf,cpu_pct,rss_bytes,net_rx,net_tx\n";
  char buf[32];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf), "%.2f", s.cpu_pct);
    out << s.ts_ns << ',' << to_string(s.nf) << ',' << buf << ','
        << s.rss_bytes << ',' << s.net_rx_bytes << ',' << s.net_tx_bytes
        << "\n";
  }
}

}  // namespace corebench

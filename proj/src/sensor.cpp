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

#include "corebench/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "corebench/corenet/client.hpp"
#include "corebench/csv.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"

namespace corebench {

void SensorConfig::validate() const {
  if (!(rate_hz > 0.0)) throw std::invalid_argument("sensor: rate_hz <= 0");
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("sensor: duration_s <= 0");
  }
  if (ue_pool < 1) throw std::invalid_argument("sensor: ue_pool < 1");
}

std::string_view to_string(SampleOutcome o) {
  switch (o) {
    case SampleOutcome::Success:
      return "success";
    case SampleOutcome::Reject:
      return "reject";
    case SampleOutcome::Timeout:
      return "timeout";
  }
  return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::uint8_t> txn_payload(std::uint64_t seed, std::uint64_t seq) {
  std::uint64_t state = seed ^ (seq * 0x9e3779b97f4a7c15ULL);
  std::vector<std::uint8_t> out(24);
  for (std::size_t i = 0; i < out.size(); i += 8) {
    const std::uint64_t v = splitmix64(state);
    for (std::size_t b = 0; b < 8; ++b) {
      out[i + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
  }
  return out;
}

std::string pool_ue_id(const std::string& prefix, std::uint64_t seq,
                       std::size_t pool) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu",
                static_cast<std::size_t>(seq % pool));
  return prefix + buf;
}

bool core_reachable(std::uint16_t port) {
  try {
    Socket s = tcp_connect(port, 1000);
    Frame ping;
    ping.msg_type = msg::kPing;
    return request_reply(s, ping, 1000).msg_type == msg::kPong;
  } catch (const NetError&) {
    return false;
  }
}

}  // namespace

std::vector<RegistrationSample> run_sensor(const SensorConfig& cfg,
                                           std::uint16_t amf_port) {
  cfg.validate();
  if (!core_reachable(amf_port)) {
    throw std::runtime_error("sensor: core unreachable on port " +
                             std::to_string(amf_port));
  }

  const auto count =
      static_cast<std::uint64_t>(cfg.rate_hz * cfg.duration_s);
  const double period_ns = 1e9 / cfg.rate_hz;

  std::vector<RegistrationSample> log;
  log.reserve(count);
  std::mutex log_mu;
  std::vector<std::thread> workers;
  workers.reserve(count);

  const std::int64_t t0 = now_mono_ns();
  for (std::uint64_t seq = 0; seq < count; ++seq) {
    const std::int64_t nominal =
        t0 + static_cast<std::int64_t>(period_ns * static_cast<double>(seq));
    sleep_until_mono_ns(nominal);

    RegistrationSample s;
    s.seq = seq;
    s.ue_id = pool_ue_id(cfg.ue_prefix, seq, cfg.ue_pool);
    s.mono_ts_ns = now_mono_ns();
    s.wall_ts_ns = now_wall_ns();
    s.sched_lag_ms = ns_to_ms(s.mono_ts_ns - nominal);

    workers.emplace_back([&, s]() mutable {
      const std::int64_t start = now_mono_ns();
      UeClient ue(amf_port, cfg.timeout_ms);
      const auto payload = txn_payload(cfg.seed, s.seq);
      const FlowResult reg =
          ue.registration_flow(s.ue_id, s.seq + 1, payload);
      s.reg_ms = reg.latency_ms;
      if (reg.status == FlowStatus::Accept) {
        const FlowResult pdu =
            ue.pdu_session_flow(s.ue_id, s.seq + 1, payload);
        s.pdu_ms = pdu.latency_ms;
        if (pdu.status == FlowStatus::Accept) {
          s.outcome = SampleOutcome::Success;
        } else if (pdu.status == FlowStatus::Reject) {
          s.outcome = SampleOutcome::Reject;
        } else {
          s.outcome = SampleOutcome::Timeout;
          s.pdu_ms = -1.0;
        }
      } else if (reg.status == FlowStatus::Reject) {
        s.outcome = SampleOutcome::Reject;
      } else {
        s.outcome = SampleOutcome::Timeout;
        s.reg_ms = -1.0;
      }
      s.total_ms = ns_to_ms(now_mono_ns() - start);
      std::lock_guard lk(log_mu);
      log.push_back(std::move(s));
    });
  }
  for (auto& w : workers) w.join();
  std::sort(log.begin(), log.end(),
            [](const auto& a, const auto& b) { return a.seq < b.seq; });
  return log;
}

DescriptiveStats summarize_values(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("summarize: empty input");
  }
  DescriptiveStats s;
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean_ms = sum / static_cast<double>(s.n);
  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean_ms) * (v - s.mean_ms);
    s.std_ms = std::sqrt(ss / static_cast<double>(s.n - 1));
  } else {
    s.std_ms = 0.0;
    s.degenerate_n = true;
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  // Nearest-rank percentiles: value at ceil(p * n), 1-indexed.
  const auto rank = [&](double p) {
    const std::size_t r = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(s.n)));
    return sorted[std::max<std::size_t>(r, 1) - 1];
  };
  s.median_ms = rank(0.50);
  s.p95_ms = rank(0.95);
  s.success_rate = 1.0;
  return s;
}

DescriptiveStats summarize(const std::vector<RegistrationSample>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("summarize: empty sample log");
  }
  std::vector<double> ok;
  for (const auto& s : samples) {
    if (s.outcome == SampleOutcome::Success) ok.push_back(s.total_ms);
  }
  if (ok.empty()) {
    DescriptiveStats s;
    s.success_rate = 0.0;
    s.degenerate_n = true;
    return s;
  }
  DescriptiveStats s = summarize_values(ok);
  s.success_rate =
      static_cast<double>(ok.size()) / static_cast<double>(samples.size());
  return s;
}

std::string format_descriptive(const DescriptiveStats& s) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.2f ms (standard deviation: %.2f ms)",
                s.mean_ms, s.std_ms);
  return buf;
}

namespace {

std::string ms_field(double v) {
  if (v < 0.0) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

void write_samples_csv(const std::string& path,
                       const std::vector<RegistrationSample>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "seq,ue_id,wall_ts_ns,mono_ts_ns,reg_ms,pdu_ms,total_ms,outcome,"
         "sched_lag_ms\n";
  char buf[64];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf), "%.3f", s.sched_lag_ms);
    out << s.seq << ',' << s.ue_id << ',' << s.wall_ts_ns << ','
        << s.mono_ts_ns << ',' << ms_field(s.reg_ms) << ','
        << ms_field(s.pdu_ms) << ',' << ms_field(s.total_ms) << ','
        << to_string(s.outcome) << ',' << buf << "\n";
  }
}

std::vector<RegistrationSample> read_samples_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_seq = t.col("seq");
  const std::size_t c_ue = t.col("ue_id");
  const std::size_t c_wall = t.col("wall_ts_ns");
  const std::size_t c_mono = t.col("mono_ts_ns");
  const std::size_t c_reg = t.col("reg_ms");
  const std::size_t c_pdu = t.col("pdu_ms");
  const std::size_t c_total = t.col("total_ms");
  const std::size_t c_outcome = t.col("outcome");
  const std::size_t c_lag = t.col("sched_lag_ms");

  std::vector<RegistrationSample> out;
  for (const auto& row : t.rows) {
    RegistrationSample s;
    s.seq = std::stoull(row[c_seq]);
    s.ue_id = row[c_ue];
    s.wall_ts_ns = std::stoll(row[c_wall]);
    s.mono_ts_ns = std::stoll(row[c_mono]);
    s.reg_ms = row[c_reg].empty() ? -1.0 : std::stod(row[c_reg]);
    s.pdu_ms = row[c_pdu].empty() ? -1.0 : std::stod(row[c_pdu]);
    s.total_ms = row[c_total].empty() ? 0.0 : std::stod(row[c_total]);
    if (row[c_outcome] == "success") {
      s.outcome = SampleOutcome::Success;
    } else if (row[c_outcome] == "reject") {
      s.outcome = SampleOutcome::Reject;
    } else {
      s.outcome = SampleOutcome::Timeout;
    }
    s.sched_lag_ms = std::stod(row[c_lag]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace corebench

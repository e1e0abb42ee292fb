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

#include "corebench/corenet/launch.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/prctl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "corebench/net.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"
#include "json.hpp"

namespace corebench {

namespace {

bool ping_nf(std::uint16_t port, int timeout_ms) {
  try {
    Socket s = tcp_connect(port, timeout_ms);
    Frame ping;
    ping.msg_type = msg::kPing;
    const Frame pong = request_reply(s, ping, timeout_ms);
    return pong.msg_type == msg::kPong;
  } catch (const NetError&) {
    return false;
  }
}

bool send_control(std::uint16_t port, const char* msg_type, int timeout_ms,
                  const char* expect_type) {
  try {
    Socket s = tcp_connect(port, timeout_ms);
    Frame f;
    f.msg_type = msg_type;
    const Frame r = request_reply(s, f, timeout_ms);
    return r.msg_type == expect_type;
  } catch (const NetError&) {
    return false;
  }
}

bool wait_exit(pid_t pid, int timeout_ms) {
  const std::int64_t deadline = now_mono_ns() + timeout_ms * 1'000'000LL;
  while (now_mono_ns() < deadline) {
    int status = 0;
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid || (r < 0 && errno == ECHILD)) return true;
    sleep_ms(20);
  }
  return false;
}

void reap(pid_t pid) {
  int status = 0;
  waitpid(pid, &status, 0);
}

}  // namespace

std::string find_nfd_binary() {
  if (const char* env = std::getenv("COREBENCH_NFD"); env && *env) {
    return env;
  }
  char buf[4096];
  const ssize_t n = readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n > 0) {
    buf[n] = '\0';
    const auto candidate =
        std::filesystem::path(buf).parent_path() / "corebench-nfd";
    if (std::filesystem::exists(candidate)) return candidate.string();
  }
  throw std::runtime_error(
      "cannot locate corebench-nfd (set COREBENCH_NFD or keep it next to "
      "the running binary)");
}

NfProcess start_nf(const NfConfig& cfg, const Topology& topo,
                   const LaunchOptions& opts) {
  const std::string nfd =
      opts.nfd_path.empty() ? find_nfd_binary() : opts.nfd_path;

  nlohmann::json jc{
      {"nf",
       {{"kind", std::string(to_string(cfg.kind))},
        {"listen_port", cfg.listen_port},
        {"work_units", cfg.work_units},
        {"store_size", cfg.store_size},
        {"upstream_timeout_ms", cfg.upstream_timeout_ms}}},
      {"topology", nlohmann::json::parse(topo.to_json())},
  };
  const std::string config = jc.dump();

  int pipefd[2];
  if (pipe(pipefd) != 0) throw std::runtime_error("pipe failed");

  const pid_t pid = fork();
  if (pid < 0) {
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    throw std::runtime_error("fork failed");
  }
  if (pid == 0) {
    // Child: readiness line goes to the pipe, diagnostics stay on stderr.
    ::close(pipefd[0]);
    dup2(pipefd[1], STDOUT_FILENO);
    ::close(pipefd[1]);
    prctl(PR_SET_PDEATHSIG, SIGKILL);  // never orphan an NF
    execl(nfd.c_str(), "corebench-nfd", "--config", config.c_str(),
          static_cast<char*>(nullptr));
    std::fprintf(stderr, "exec %s failed: %s\n", nfd.c_str(),
                 std::strerror(errno));
    _exit(127);
  }

  ::close(pipefd[1]);
  // Read the child's first line: "READY" or "ERROR: <diagnostic>".
  std::string line;
  const std::int64_t deadline =
      now_mono_ns() + opts.ready_timeout_ms * 1'000'000LL;
  bool ready = false;
  std::string error;
  for (;;) {
    const std::int64_t remain_ms = (deadline - now_mono_ns()) / 1'000'000;
    if (remain_ms <= 0) {
      error = "timeout waiting for readiness";
      break;
    }
    pollfd p{pipefd[0], POLLIN, 0};
    if (poll(&p, 1, static_cast<int>(remain_ms)) <= 0) continue;
    char c;
    const ssize_t r = read(pipefd[0], &c, 1);
    if (r <= 0) {
      error = "nf process exited before readiness";
      break;
    }
    if (c == '\n') {
      if (line == "READY") {
        ready = true;
      } else {
        error = line;
      }
      break;
    }
    line.push_back(c);
  }
  ::close(pipefd[0]);
  if (!ready) {
    kill(pid, SIGKILL);
    reap(pid);
    throw std::runtime_error("start_nf(" + std::string(to_string(cfg.kind)) +
                             "): " + (error.empty() ? "startup failed" : error));
  }
  return NfProcess{cfg.kind, pid, cfg.listen_port};
}

CoreHandle::~CoreHandle() {
  for (const auto& p : procs_) {
    if (p.pid > 0) kill(p.pid, SIGKILL);
  }
  for (const auto& p : procs_) {
    if (p.pid > 0) reap(p.pid);
  }
}

CoreHandle CoreHandle::up(const Topology& topo, const LaunchOptions& opts) {
  topo.validate();
  CoreHandle core;
  core.topo_ = topo;

  // NRF first so peers find the registry at startup.
  std::vector<const NfConfig*> order;
  for (const auto& c : topo.nfs) {
    if (c.kind == NfKind::NRF) order.push_back(&c);
  }
  for (const auto& c : topo.nfs) {
    if (c.kind != NfKind::NRF) order.push_back(&c);
  }
  try {
    for (const NfConfig* c : order) {
      core.procs_.push_back(start_nf(*c, topo, opts));
    }
    for (const auto& p : core.procs_) {
      const std::int64_t deadline =
          now_mono_ns() + opts.ready_timeout_ms * 1'000'000LL;
      bool ok = false;
      while (now_mono_ns() < deadline) {
        if (ping_nf(p.port, 500)) {
          ok = true;
          break;
        }
        sleep_ms(50);
      }
      if (!ok) {
        throw std::runtime_error("nf " + std::string(to_string(p.kind)) +
                                 " never answered PING");
      }
    }
  } catch (...) {
    core.stop();
    throw;
  }
  return core;
}

void CoreHandle::provision(std::size_t ue_count, const std::string& prefix) {
  const auto port = topo_.port_of(NfKind::UDR);
  if (!port) throw std::runtime_error("provision: no UDR in topology");
  Socket s = tcp_connect(*port, 2000);
  Frame f;
  f.msg_type = msg::kProvision;
  const std::string body =
      nlohmann::json{{"prefix", prefix}, {"count", ue_count}}.dump();
  f.payload.assign(body.begin(), body.end());
  const Frame r = request_reply(s, f, 5000);
  if (r.msg_type != msg::kProvisionAck) {
    throw std::runtime_error("provision rejected");
  }
}

void CoreHandle::stop() {
  for (auto& p : procs_) {
    if (p.pid <= 0) continue;
    send_control(p.port, msg::kShutdown, 500, msg::kShutdownAck);
  }
  for (auto& p : procs_) {
    if (p.pid <= 0) continue;
    if (!wait_exit(p.pid, 2000)) {
      kill(p.pid, SIGTERM);
      if (!wait_exit(p.pid, 1000)) {
        kill(p.pid, SIGKILL);
        reap(p.pid);
      }
    }
    p.pid = -1;
  }
  procs_.clear();
}

void CoreHandle::stop_nf(NfKind kind) {
  for (auto& p : procs_) {
    if (p.kind != kind || p.pid <= 0) continue;
    send_control(p.port, msg::kShutdown, 500, msg::kShutdownAck);
    if (!wait_exit(p.pid, 2000)) {
      kill(p.pid, SIGKILL);
      reap(p.pid);
    }
    p.pid = -1;
  }
}

void CoreHandle::kill_nf(NfKind kind) {
  for (auto& p : procs_) {
    if (p.kind != kind || p.pid <= 0) continue;
    kill(p.pid, SIGKILL);
    reap(p.pid);
    p.pid = -1;
  }
}

bool CoreHandle::alive(NfKind kind) const {
  for (const auto& p : procs_) {
    if (p.kind == kind && p.pid > 0) return kill(p.pid, 0) == 0;
  }
  return false;
}

std::string CoreHandle::descriptor_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : procs_) {
    arr.push_back({{"kind", std::string(to_string(p.kind))},
                   {"port", p.port},
                   {"pid", p.pid}});
  }
  return arr.dump(2);
}

void CoreHandle::save_descriptor(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write descriptor " + path);
  out << descriptor_json() << "\n";
}

std::vector<NfProcess> load_descriptor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open descriptor " + path);
  nlohmann::json j;
  in >> j;
  std::vector<NfProcess> out;
  for (const auto& item : j) {
    NfProcess p;
    const auto kind = parse_nf_kind(item.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("descriptor: bad kind");
    p.kind = *kind;
    p.port = item.at("port").get<std::uint16_t>();
    p.pid = item.at("pid").get<pid_t>();
    out.push_back(p);
  }
  return out;
}

}  // namespace corebench

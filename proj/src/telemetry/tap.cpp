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

#include "corebench/telemetry/tap.hpp"

#include <fcntl.h>
#include <pthread.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>

#include "corebench/time_util.hpp"

namespace corebench {

void append_mirror_record(std::vector<std::uint8_t>& out, std::int64_t ts_ns,
                          std::uint8_t src, std::uint8_t dst,
                          std::span<const std::uint8_t> body) {
  const std::uint32_t rec_len = static_cast<std::uint32_t>(10 + body.size());
  const std::size_t base = out.size();
  out.resize(base + 4 + rec_len);
  std::uint8_t* p = out.data() + base;
  std::memcpy(p, &rec_len, 4);
  std::memcpy(p + 4, &ts_ns, 8);
  p[12] = src;
  p[13] = dst;
  if (!body.empty()) std::memcpy(p + 14, body.data(), body.size());
}

void MirrorStreamParser::feed(std::span<const std::uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  std::size_t off = 0;
  while (buf_.size() - off >= 4) {
    std::uint32_t rec_len = 0;
    std::memcpy(&rec_len, buf_.data() + off, 4);
    if (rec_len < 10 || rec_len > (1u << 21)) {
      throw std::runtime_error("mirror stream: corrupt record length");
    }
    if (buf_.size() - off - 4 < rec_len) break;
    MirrorRecord rec;
    std::memcpy(&rec.ts_ns, buf_.data() + off + 4, 8);
    rec.src = buf_[off + 12];
    rec.dst = buf_[off + 13];
    rec.body.assign(buf_.begin() + static_cast<long>(off) + 14,
                    buf_.begin() + static_cast<long>(off) + 4 + rec_len);
    done_.push_back(std::move(rec));
    off += 4 + rec_len;
  }
  buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(off));
}

std::vector<MirrorRecord> MirrorStreamParser::take() {
  return std::exchange(done_, {});
}

// ---------------------------------------------------------------------------
// ShmRing
// ---------------------------------------------------------------------------

struct ShmRing::Hdr {
  std::uint64_t magic;
  std::uint64_t capacity;
  std::uint64_t head;  // total bytes written
  std::uint64_t tail;  // total bytes consumed
  std::atomic<std::uint64_t> dropped;
  pthread_mutex_t mu;
};

namespace {
constexpr std::uint64_t kRingMagic = 0x636f7265b2b2ULL;

// Robust so a writer killed mid-push cannot wedge the ring.
void init_shared_mutex(pthread_mutex_t* mu) {
  pthread_mutexattr_t attr;
  pthread_mutexattr_init(&attr);
  pthread_mutexattr_setpshared(&attr, PTHREAD_PROCESS_SHARED);
  pthread_mutexattr_setrobust(&attr, PTHREAD_MUTEX_ROBUST);
  pthread_mutex_init(mu, &attr);
  pthread_mutexattr_destroy(&attr);
}

bool lock_shared(pthread_mutex_t* mu) {
  const int rc = pthread_mutex_lock(mu);
  if (rc == EOWNERDEAD) {
    pthread_mutex_consistent(mu);
    return true;
  }
  return rc == 0;
}

bool trylock_shared(pthread_mutex_t* mu) {
  const int rc = pthread_mutex_trylock(mu);
  if (rc == EOWNERDEAD) {
    pthread_mutex_consistent(mu);
    return true;
  }
  return rc == 0;
}
}  // namespace

ShmRing ShmRing::create(const std::string& name, std::size_t data_bytes) {
  shm_unlink(name.c_str());  // stale ring from a crashed session
  const int fd = shm_open(name.c_str(), O_CREAT | O_EXCL | O_RDWR, 0600);
  if (fd < 0) throw std::runtime_error("shm_open(create) failed: " + name);
  const std::size_t total = sizeof(Hdr) + data_bytes;
  if (ftruncate(fd, static_cast<off_t>(total)) != 0) {
    ::close(fd);
    shm_unlink(name.c_str());
    throw std::runtime_error("shm ftruncate failed");
  }
  void* mem = mmap(nullptr, total, PROT_READ | PROT_WRITE, MAP_SHARED, fd, 0);
  ::close(fd);
  if (mem == MAP_FAILED) {
    shm_unlink(name.c_str());
    throw std::runtime_error("shm mmap failed");
  }
  ShmRing r;
  r.hdr_ = static_cast<Hdr*>(mem);
  r.data_ = reinterpret_cast<std::uint8_t*>(mem) + sizeof(Hdr);
  r.map_bytes_ = total;
  r.name_ = name;
  r.owner_ = true;
  r.hdr_->capacity = data_bytes;
  r.hdr_->head = 0;
  r.hdr_->tail = 0;
  r.hdr_->dropped.store(0);
  init_shared_mutex(&r.hdr_->mu);
  r.hdr_->magic = kRingMagic;
  return r;
}

ShmRing ShmRing::open_existing(const std::string& name) {
  const int fd = shm_open(name.c_str(), O_RDWR, 0600);
  if (fd < 0) throw std::runtime_error("shm_open failed: " + name);
  struct stat st {};
  if (fstat(fd, &st) != 0 || st.st_size < static_cast<off_t>(sizeof(Hdr))) {
    ::close(fd);
    throw std::runtime_error("shm ring too small: " + name);
  }
  void* mem = mmap(nullptr, static_cast<std::size_t>(st.st_size),
                   PROT_READ | PROT_WRITE, MAP_SHARED, fd, 0);
  ::close(fd);
  if (mem == MAP_FAILED) throw std::runtime_error("shm mmap failed");
  ShmRing r;
  r.hdr_ = static_cast<Hdr*>(mem);
  r.data_ = reinterpret_cast<std::uint8_t*>(mem) + sizeof(Hdr);
  r.map_bytes_ = static_cast<std::size_t>(st.st_size);
  r.name_ = name;
  r.owner_ = false;
  if (r.hdr_->magic != kRingMagic) {
    throw std::runtime_error("shm ring not initialized: " + name);
  }
  return r;
}

ShmRing::ShmRing(ShmRing&& other) noexcept
    : hdr_(std::exchange(other.hdr_, nullptr)),
      data_(std::exchange(other.data_, nullptr)),
      map_bytes_(std::exchange(other.map_bytes_, 0)),
      name_(std::move(other.name_)),
      owner_(std::exchange(other.owner_, false)) {}

ShmRing& ShmRing::operator=(ShmRing&& other) noexcept {
  if (this != &other) {
    this->~ShmRing();
    new (this) ShmRing(std::move(other));
  }
  return *this;
}

ShmRing::~ShmRing() {
  if (hdr_ != nullptr) {
    munmap(hdr_, map_bytes_);
    if (owner_) shm_unlink(name_.c_str());
  }
}

bool ShmRing::try_push(std::span<const std::uint8_t> record) {
  // Bounded acquisition: a holder preempted mid-push can park the lock for
  // a scheduling quantum, so a bare trylock spin would drop spuriously on
  // oversubscribed hosts. Wait up to ~2 ms in 50 us naps, then drop; the
  // data path is never blocked indefinitely and sleeping does not show up
  // in the capture-path CPU accounting.
  bool locked = false;
  for (int i = 0; i < 64 && !locked; ++i) {
    locked = trylock_shared(&hdr_->mu);
  }
  for (int i = 0; i < 40 && !locked; ++i) {
    timespec nap{0, 50'000};
    nanosleep(&nap, nullptr);
    locked = trylock_shared(&hdr_->mu);
  }
  if (!locked) {
    hdr_->dropped.fetch_add(1, std::memory_order_relaxed);
    return false;
  }
  const std::uint64_t cap = hdr_->capacity;
  const std::uint64_t used = hdr_->head - hdr_->tail;
  const std::uint64_t need = 4 + record.size();
  if (cap - used < need) {
    hdr_->dropped.fetch_add(1, std::memory_order_relaxed);
    pthread_mutex_unlock(&hdr_->mu);
    return false;
  }
  const std::uint32_t len = static_cast<std::uint32_t>(record.size());
  std::uint64_t pos = hdr_->head % cap;
  const std::uint8_t* len_bytes = reinterpret_cast<const std::uint8_t*>(&len);
  for (int i = 0; i < 4; ++i) {
    data_[pos] = len_bytes[i];
    pos = (pos + 1) % cap;
  }
  std::size_t off = 0;
  while (off < record.size()) {
    const std::size_t chunk =
        std::min<std::size_t>(record.size() - off, cap - pos);
    std::memcpy(data_ + pos, record.data() + off, chunk);
    off += chunk;
    pos = (pos + chunk) % cap;
  }
  hdr_->head += need;
  pthread_mutex_unlock(&hdr_->mu);
  return true;
}

std::vector<MirrorRecord> ShmRing::pop_all() {
  std::vector<std::uint8_t> raw;
  if (!lock_shared(&hdr_->mu)) return {};
  const std::uint64_t cap = hdr_->capacity;
  while (hdr_->tail < hdr_->head) {
    std::uint32_t len = 0;
    std::uint64_t pos = hdr_->tail % cap;
    std::uint8_t* len_bytes = reinterpret_cast<std::uint8_t*>(&len);
    for (int i = 0; i < 4; ++i) {
      len_bytes[i] = data_[pos];
      pos = (pos + 1) % cap;
    }
    const std::size_t base = raw.size();
    raw.resize(base + 4 + len);
    std::memcpy(raw.data() + base, &len, 4);
    std::size_t off = 0;
    while (off < len) {
      const std::size_t chunk = std::min<std::size_t>(len - off, cap - pos);
      std::memcpy(raw.data() + base + 4 + off, data_ + pos, chunk);
      off += chunk;
      pos = (pos + chunk) % cap;
    }
    hdr_->tail += 4 + len;
  }
  pthread_mutex_unlock(&hdr_->mu);
  MirrorStreamParser parser;
  parser.feed(raw);
  return parser.take();
}

std::uint64_t ShmRing::dropped() const {
  return hdr_->dropped.load(std::memory_order_relaxed);
}

std::size_t ShmRing::capacity() const {
  return static_cast<std::size_t>(hdr_->capacity);
}

// ---------------------------------------------------------------------------
// CaptureTap
// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kObserverPendingCap = 4 << 20;
}

void CaptureTap::configure_inline(const std::string& ring_name) {
  auto ring = std::make_unique<ShmRing>(ShmRing::open_existing(ring_name));
  std::lock_guard lk(mu_);
  ring_ = std::move(ring);
  observer_sock_.close_fd();
  pending_.clear();
  pending_rd_ = 0;
  mode_ = Mode::Inline;
}

void CaptureTap::configure_observer(std::uint16_t observer_port,
                                    int connect_timeout_ms) {
  Socket s = tcp_connect(observer_port, connect_timeout_ms);
  std::lock_guard lk(mu_);
  observer_sock_ = std::move(s);
  ring_.reset();
  pending_.clear();
  pending_rd_ = 0;
  mode_ = Mode::Observer;
}

void CaptureTap::disable() {
  std::lock_guard lk(mu_);
  // Give the observer path one last flush opportunity.
  if (mode_ == Mode::Observer && observer_sock_.valid()) {
    flush_pending_locked();
  }
  mode_ = Mode::Off;
  ring_.reset();
  observer_sock_.close_fd();
  pending_.clear();
  pending_rd_ = 0;
}

bool CaptureTap::active() const {
  std::lock_guard lk(mu_);
  return mode_ != Mode::Off;
}

void CaptureTap::flush_pending_locked() {
  while (pending_rd_ < pending_.size()) {
    const long n = observer_sock_.write_nonblocking(
        std::span<const std::uint8_t>(pending_.data() + pending_rd_,
                                      pending_.size() - pending_rd_));
    if (n <= 0) break;
    pending_rd_ += static_cast<std::size_t>(n);
    bytes_sent_.fetch_add(static_cast<std::uint64_t>(n),
                          std::memory_order_relaxed);
  }
  if (pending_rd_ == pending_.size()) {
    pending_.clear();
    pending_rd_ = 0;
  } else if (pending_rd_ > (1 << 20)) {
    pending_.erase(pending_.begin(), pending_.begin() + static_cast<long>(pending_rd_));
    pending_rd_ = 0;
  }
}

void CaptureTap::mirror(std::uint8_t src, std::uint8_t dst,
                        std::span<const std::uint8_t> body) noexcept {
  const std::int64_t t0 = thread_cpu_ns();
  try {
    std::lock_guard lk(mu_);
    if (mode_ == Mode::Inline && ring_) {
      std::vector<std::uint8_t> rec;
      append_mirror_record(rec, now_mono_ns(), src, dst, body);
      // append_mirror_record frames with a leading u32; the ring adds its
      // own, so push the framed payload without the outer prefix.
      if (ring_->try_push(std::span<const std::uint8_t>(rec).subspan(4))) {
        frames_.fetch_add(1, std::memory_order_relaxed);
      } else {
        dropped_.fetch_add(1, std::memory_order_relaxed);
      }
    } else if (mode_ == Mode::Observer && observer_sock_.valid()) {
      if (pending_.size() - pending_rd_ + body.size() > kObserverPendingCap) {
        dropped_.fetch_add(1, std::memory_order_relaxed);
      } else {
        append_mirror_record(pending_, now_mono_ns(), src, dst, body);
        frames_.fetch_add(1, std::memory_order_relaxed);
      }
      flush_pending_locked();
    }
  } catch (...) {
    dropped_.fetch_add(1, std::memory_order_relaxed);
  }
  cpu_ns_.fetch_add(thread_cpu_ns() - t0, std::memory_order_relaxed);
}

TapStats CaptureTap::stats() const {
  TapStats s;
  s.frames = frames_.load(std::memory_order_relaxed);
  s.dropped = dropped_.load(std::memory_order_relaxed);
  s.cpu_ns = cpu_ns_.load(std::memory_order_relaxed);
  std::lock_guard lk(mu_);
  if (mode_ == Mode::Inline && ring_) {
    s.buf_bytes = ring_->capacity();
  } else if (mode_ == Mode::Observer) {
    s.buf_bytes = pending_.size() - pending_rd_;
  }
  return s;
}

}  // namespace corebench

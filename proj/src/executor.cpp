#include "onesweep/executor.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

namespace onesweep {

namespace {

inline void cpu_relax() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  _mm_pause();
#endif
}

}  // namespace

const char* phase_name(Phase phase) noexcept {
  switch (phase) {
    case Phase::Histogram: return "histogram";
    case Phase::ExclusiveSum: return "exclusive_sum";
    case Phase::Binning: return "binning";
    case Phase::Upsweep: return "upsweep";
    case Phase::BlockPrefix: return "block_prefix";
    case Phase::Downsweep: return "downsweep";
    case Phase::FinalCopy: return "final_copy";
  }
  return "?";
}

std::uint64_t MemOpLedger::element_reads() const noexcept {
  std::uint64_t total = 0;
  for (const auto& p : phases) total += p.element_reads;
  return total;
}

std::uint64_t MemOpLedger::element_writes() const noexcept {
  std::uint64_t total = 0;
  for (const auto& p : phases) total += p.element_writes;
  return total;
}

std::uint64_t MemOpLedger::element_ops() const noexcept {
  return element_reads() + element_writes();
}

std::uint64_t MemOpLedger::counter_ops() const noexcept {
  std::uint64_t total = 0;
  for (const auto& p : phases) total += p.counter_ops;
  return total;
}

std::uint64_t MemOpLedger::copy_ops() const noexcept {
  std::uint64_t total = 0;
  for (const auto& p : phases) total += p.copy_ops;
  return total;
}

BlockContext::BlockContext(unsigned worker, const std::atomic<bool>* cancelled,
                           const DelayInjection* delays, std::uint64_t stream)
    : worker_(worker), cancelled_(cancelled), delays_(delays), rng_(stream) {}

void BlockContext::pause() {
  if (delays_ == nullptr) return;
  const auto roll = rng_() % 1000;
  if (roll < delays_->sleep_per_mille) {
    const auto max_us = static_cast<std::uint64_t>(delays_->max_pause.count());
    const auto us = max_us == 0 ? 0 : rng_() % (max_us + 1);
    std::this_thread::sleep_for(std::chrono::microseconds(us));
  } else if (roll < 2 * delays_->sleep_per_mille) {
    std::this_thread::yield();
  }
}

void BlockContext::wait() {
  ++waits_;
  if (cancelled_ != nullptr && cancelled_->load(std::memory_order_relaxed))
    throw GridCancelled();
  if (delays_ != nullptr) pause();
  if (++spins_ % Executor::kSpinsBeforeYield == 0)
    std::this_thread::yield();
  else
    cpu_relax();
}

Executor::Executor(unsigned workers) : workers_(workers == 0 ? 1 : workers) {
  threads_.reserve(workers_ - 1);
  for (unsigned w = 1; w < workers_; ++w)
    threads_.emplace_back([this, w] { worker_main(w); });
}

Executor::~Executor() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

unsigned Executor::default_workers() {
  if (const char* env = std::getenv("ONESWEEP_WORKERS")) {
    unsigned value = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc() && ptr == end && value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void Executor::enable_delays(const DelayInjection& delays) {
  delays_ = delays;
}

void Executor::run_blocks(std::size_t g, const Body& body) {
  if (g == 0) return;
  TileTicket ticket(g);
  Grid grid;
  grid.body = &body;
  grid.ticket = &ticket;
  ++grid_serial_;

  if (!threads_.empty()) {
    {
      std::lock_guard lock(mutex_);
      grid_ = &grid;
      ++generation_;
      busy_ = static_cast<unsigned>(threads_.size());
    }
    wake_.notify_all();
  }

  drain(grid, 0);

  if (!threads_.empty()) {
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return busy_ == 0; });
    grid_ = nullptr;
  }
  if (grid.error) std::rethrow_exception(grid.error);
}

void Executor::worker_main(unsigned worker) {
  std::uint64_t seen = 0;
  for (;;) {
    Grid* grid = nullptr;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      grid = grid_;
    }
    drain(*grid, worker);
    {
      std::lock_guard lock(mutex_);
      if (--busy_ == 0) done_.notify_one();
    }
  }
}

void Executor::drain(Grid& grid, unsigned worker) {
  const DelayInjection* delays = delays_ ? &*delays_ : nullptr;
  const std::uint64_t seed = delays ? delays->seed : 0;
  BlockContext ctx(worker, &grid.cancelled, delays,
                   seed ^ (grid_serial_ * 0x9E3779B97F4A7C15ull) ^
                       (std::uint64_t{worker} << 32));
  while (!grid.cancelled.load(std::memory_order_relaxed)) {
    const auto tile = grid.ticket->next_tile();
    if (!tile) break;
    ctx.tile_ = *tile;
    ctx.spins_ = 0;
    try {
      (*grid.body)(ctx);
    } catch (...) {
      {
        std::lock_guard lock(grid.error_mutex);
        if (!grid.error) grid.error = std::current_exception();
      }
      grid.cancelled.store(true, std::memory_order_relaxed);
      break;
    }
  }
}

MemOpLedger Executor::ledger_snapshot() const noexcept {
  MemOpLedger out;
  for (std::size_t p = 0; p < kPhaseCount; ++p) {
    const auto& c = counters_[p];
    auto& dst = out.phases[p];
    dst.element_reads = c[0].load(std::memory_order_relaxed);
    dst.element_writes = c[1].load(std::memory_order_relaxed);
    dst.counter_ops = c[2].load(std::memory_order_relaxed);
    dst.copy_ops = c[3].load(std::memory_order_relaxed);
  }
  return out;
}

void Executor::ledger_reset() noexcept {
  for (auto& phase : counters_)
    for (auto& c : phase) c.store(0, std::memory_order_relaxed);
}

}  // namespace onesweep

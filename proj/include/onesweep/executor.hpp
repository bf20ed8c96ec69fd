#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace onesweep {

enum class Phase : std::size_t {
  Histogram,
  ExclusiveSum,
  Binning,
  Upsweep,
  BlockPrefix,
  Downsweep,
  FinalCopy,
};
inline constexpr std::size_t kPhaseCount = 7;

enum class OpKind : std::size_t { ElementRead, ElementWrite, CounterOp, Copy };
inline constexpr std::size_t kOpKindCount = 4;

const char* phase_name(Phase phase) noexcept;

struct PhaseCounts {
  std::uint64_t element_reads = 0;
  std::uint64_t element_writes = 0;
  std::uint64_t counter_ops = 0;
  std::uint64_t copy_ops = 0;

  std::uint64_t element_ops() const noexcept {
    return element_reads + element_writes;
  }
  friend bool operator==(const PhaseCounts&, const PhaseCounts&) = default;
};

/// Point-in-time copy of the memory-operation counters.
///
/// Element traffic counts global-equivalent reads and writes of whole
/// records (a key, or a key with its payload). Status-counter and histogram
/// bookkeeping goes to `counter_ops`; the final copy that returns an odd
/// number of passes to the caller's buffer goes to `copy_ops` under
/// Phase::FinalCopy and is never part of `element_ops()`.
struct MemOpLedger {
  std::array<PhaseCounts, kPhaseCount> phases{};

  const PhaseCounts& operator[](Phase p) const noexcept {
    return phases[static_cast<std::size_t>(p)];
  }
  std::uint64_t element_reads() const noexcept;
  std::uint64_t element_writes() const noexcept;
  std::uint64_t element_ops() const noexcept;
  std::uint64_t counter_ops() const noexcept;
  std::uint64_t copy_ops() const noexcept;

  friend bool operator==(const MemOpLedger&, const MemOpLedger&) = default;
};

/// In-order tile dispenser shared by all workers of one grid.
class TileTicket {
 public:
  explicit TileTicket(std::size_t tile_count) noexcept : count_(tile_count) {}

  std::optional<std::size_t> next_tile() noexcept {
    const std::size_t t = next_.fetch_add(1, std::memory_order_relaxed);
    if (t >= count_) return std::nullopt;
    return t;
  }
  std::size_t tile_count() const noexcept { return count_; }

 private:
  std::atomic<std::size_t> next_{0};
  std::size_t count_;
};

/// Thrown out of a waiting block when another block of the grid failed.
class GridCancelled : public std::runtime_error {
 public:
  GridCancelled() : std::runtime_error("grid cancelled") {}
};

struct DelayInjection {
  std::uint64_t seed = 0;
  std::chrono::microseconds max_pause{50};
  // Probability (per mille) that a pause point actually sleeps; otherwise
  // it yields or returns immediately.
  unsigned sleep_per_mille = 250;
};

class Executor;

/// Per-tile view handed to a run_blocks body.
class BlockContext {
 public:
  std::size_t tile() const noexcept { return tile_; }
  unsigned worker() const noexcept { return worker_; }

  /// Schedule-perturbation point. A no-op unless delay injection is enabled.
  void pause();

  /// Called by spin loops while a dependency is not ready: polls a bounded
  /// number of times, then yields. Throws GridCancelled if the grid aborted.
  void wait();

  std::uint64_t waits() const noexcept { return waits_; }

 private:
  friend class Executor;
  BlockContext(unsigned worker, const std::atomic<bool>* cancelled,
               const DelayInjection* delays, std::uint64_t stream);

  std::size_t tile_ = 0;
  unsigned worker_ = 0;
  const std::atomic<bool>* cancelled_ = nullptr;
  const DelayInjection* delays_ = nullptr;
  std::mt19937_64 rng_;
  std::uint64_t waits_ = 0;
  unsigned spins_ = 0;
};

/// Fixed pool of workers emulating the thread blocks of a grid.
///
/// run_blocks is not reentrant: one grid at a time per executor. The calling
/// thread participates as worker 0.
class Executor {
 public:
  using Body = std::function<void(BlockContext&)>;

  static constexpr unsigned kSpinsBeforeYield = 64;

  explicit Executor(unsigned workers = default_workers());
  ~Executor();
  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  /// Hardware concurrency, overridden by the ONESWEEP_WORKERS environment
  /// variable when set to a positive integer.
  static unsigned default_workers();

  unsigned workers() const noexcept { return workers_; }

  /// Runs body once per tile in [0, g) and returns after all complete.
  /// Tiles are handed out in increasing order; each worker finishes its tile
  /// before taking the next. The first exception thrown by a body is
  /// rethrown after every worker has drained.
  void run_blocks(std::size_t g, const Body& body);

  void enable_delays(const DelayInjection& delays);
  void disable_delays() noexcept { delays_.reset(); }
  bool delays_enabled() const noexcept { return delays_.has_value(); }

  void ledger_record(Phase phase, OpKind kind, std::uint64_t count) noexcept {
    counters_[static_cast<std::size_t>(phase)][static_cast<std::size_t>(kind)]
        .fetch_add(count, std::memory_order_relaxed);
  }
  MemOpLedger ledger_snapshot() const noexcept;
  void ledger_reset() noexcept;

 private:
  struct Grid {
    const Body* body = nullptr;
    TileTicket* ticket = nullptr;
    std::atomic<bool> cancelled{false};
    std::mutex error_mutex;
    std::exception_ptr error;
  };

  void worker_main(unsigned worker);
  void drain(Grid& grid, unsigned worker);

  unsigned workers_;
  std::optional<DelayInjection> delays_;
  std::uint64_t grid_serial_ = 0;

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  Grid* grid_ = nullptr;
  std::uint64_t generation_ = 0;
  unsigned busy_ = 0;
  bool stopping_ = false;

  std::array<std::array<std::atomic<std::uint64_t>, kOpKindCount>, kPhaseCount>
      counters_{};
};

}  // namespace onesweep

#pragma once

#include <atomic>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>

namespace onesweep {

// Status counter word: status in bits 31-30, value in bits 29-0.
enum class CounterStatus : std::uint32_t {
  NotReady = 0,   // N
  Local = 1,      // L: per-tile digit count
  Inclusive = 2,  // G: inclusive prefix over this and all previous tiles
};

inline constexpr unsigned kCounterValueBits = 30;
inline constexpr std::uint32_t kCounterValueLimit = std::uint32_t{1}
                                                    << kCounterValueBits;
inline constexpr std::uint32_t kCounterValueMask = kCounterValueLimit - 1;

struct UnpackedCounter {
  CounterStatus status;
  std::uint32_t value;
  friend bool operator==(const UnpackedCounter&, const UnpackedCounter&) =
      default;
};

/// Throws std::out_of_range if value does not fit in 30 bits.
std::uint32_t pack_counter(CounterStatus status, std::uint32_t value);

constexpr UnpackedCounter unpack_counter(std::uint32_t word) noexcept {
  return {static_cast<CounterStatus>(word >> kCounterValueBits),
          word & kCounterValueMask};
}

/// r x g status counters for one binning pass (or one strip of it), stored
/// digit-major: one contiguous array of per-tile counters per digit. Freshly
/// constructed matrices hold all-zero words (status N).
class CounterMatrix {
 public:
  CounterMatrix(std::uint32_t radix, std::size_t tiles);

  std::uint32_t radix() const noexcept { return radix_; }
  std::size_t tiles() const noexcept { return tiles_; }

  std::atomic<std::uint32_t>& at(std::uint32_t digit,
                                 std::size_t tile) noexcept {
    assert(digit < radix_ && tile < tiles_);
    return words_[static_cast<std::size_t>(digit) * tiles_ + tile];
  }
  std::uint32_t load(std::uint32_t digit, std::size_t tile) const noexcept {
    return words_[static_cast<std::size_t>(digit) * tiles_ + tile].load(
        std::memory_order_acquire);
  }

 private:
  std::uint32_t radix_;
  std::size_t tiles_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> words_;
};

/// Stores pack(L, local_count) for the tile's counter. The counter must
/// still be N.
void publish_local(CounterMatrix& m, std::uint32_t digit, std::size_t tile,
                   std::uint32_t local_count);

/// Stores pack(G, inclusive) for the tile's counter, which must hold L.
void publish_inclusive(CounterMatrix& m, std::uint32_t digit,
                       std::size_t tile, std::uint32_t inclusive);

struct LookbackResult {
  std::uint32_t exclusive = 0;
  std::uint32_t reads = 0;  // predecessor counter loads, including re-polls
};

/// Decoupled lookback: walks predecessors backwards one counter at a time,
/// summing L values and stopping at the first G value. `wait()` is invoked
/// whenever a predecessor is still N. The calling tile must already have
/// published its own L value.
template <class Wait>
LookbackResult lookback_exclusive(const CounterMatrix& m, std::uint32_t digit,
                                  std::size_t tile, Wait&& wait) {
  LookbackResult result;
  for (std::size_t pred = tile; pred-- > 0;) {
    UnpackedCounter c = unpack_counter(m.load(digit, pred));
    ++result.reads;
    while (c.status == CounterStatus::NotReady) {
      wait();
      c = unpack_counter(m.load(digit, pred));
      ++result.reads;
    }
    result.exclusive += c.value;
    if (c.status == CounterStatus::Inclusive) break;
  }
  return result;
}

}  // namespace onesweep

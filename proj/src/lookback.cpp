#include "onesweep/lookback.hpp"

#include <stdexcept>

namespace onesweep {

std::uint32_t pack_counter(CounterStatus status, std::uint32_t value) {
  if (value >= kCounterValueLimit)
    throw std::out_of_range("status counter value must be below 2^30");
  return (static_cast<std::uint32_t>(status) << kCounterValueBits) | value;
}

CounterMatrix::CounterMatrix(std::uint32_t radix, std::size_t tiles)
    : radix_(radix),
      tiles_(tiles),
      words_(std::make_unique<std::atomic<std::uint32_t>[]>(
          static_cast<std::size_t>(radix) * tiles)) {}

void publish_local(CounterMatrix& m, std::uint32_t digit, std::size_t tile,
                   std::uint32_t local_count) {
  const std::uint32_t word = pack_counter(CounterStatus::Local, local_count);
  auto& slot = m.at(digit, tile);
  assert(unpack_counter(slot.load(std::memory_order_relaxed)).status ==
             CounterStatus::NotReady &&
         "status counter published twice");
  slot.store(word, std::memory_order_release);
}

void publish_inclusive(CounterMatrix& m, std::uint32_t digit,
                       std::size_t tile, std::uint32_t inclusive) {
  const std::uint32_t word = pack_counter(CounterStatus::Inclusive, inclusive);
  auto& slot = m.at(digit, tile);
  assert(unpack_counter(slot.load(std::memory_order_relaxed)).status ==
             CounterStatus::Local &&
         "inclusive prefix published before local count");
  slot.store(word, std::memory_order_release);
}

}  // namespace onesweep

#include "onesweep/histogram.hpp"

#include <cassert>

namespace onesweep {

void exclusive_sum(std::span<const std::uint64_t> counts,
                   std::span<std::uint64_t> out) noexcept {
  assert(out.size() == counts.size());
  std::uint64_t running = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint64_t c = counts[i];
    out[i] = running;
    running += c;
  }
}

std::vector<std::uint64_t> exclusive_sum(
    std::span<const std::uint64_t> counts) {
  std::vector<std::uint64_t> out(counts.size());
  exclusive_sum(counts, out);
  return out;
}

GlobalBinOffsets global_bin_offsets(const GlobalHistogram& h) {
  GlobalBinOffsets o{PlaceTable(h.counts.passes(), h.counts.radix())};
  for (unsigned place = 0; place < h.counts.passes(); ++place)
    exclusive_sum(h.counts.row(place), o.offsets.row(place));
  return o;
}

}  // namespace onesweep

#include "onesweep/baseline.hpp"

namespace onesweep {

BlockHistogramTable rts_block_prefix(const BlockHistogramTable& t) {
  BlockHistogramTable out;
  out.tiles = t.tiles;
  out.radix = t.radix;
  out.cells.assign(t.cells.size(), 0);
  std::uint64_t running = 0;
  for (std::uint32_t d = 0; d < t.radix; ++d) {
    for (std::size_t tile = 0; tile < t.tiles; ++tile) {
      out.cells[tile * t.radix + d] = running;
      running += t.at(tile, d);
    }
  }
  return out;
}

}  // namespace onesweep

#include "onesweep/ranking.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>

namespace onesweep {

void wlms_rank_into(std::span<const std::uint32_t> digits, unsigned digit_bits,
                    std::span<std::uint32_t> running,
                    std::span<std::uint32_t> ranks) {
  const std::size_t lanes = digits.size();
  assert(lanes <= kLaneCount && ranks.size() >= lanes);
  if (lanes == 0) return;
  const std::uint32_t active =
      lanes == kLaneCount ? ~std::uint32_t{0}
                          : (std::uint32_t{1} << lanes) - 1;

  std::array<std::uint32_t, 16> votes{};
  for (unsigned b = 0; b < digit_bits; ++b) {
    std::uint32_t ballot = 0;
    for (std::size_t lane = 0; lane < lanes; ++lane)
      ballot |= ((digits[lane] >> b) & 1u) << lane;
    votes[b] = ballot;
  }

  std::array<std::uint32_t, kLaneCount> peers;
  std::array<std::uint32_t, kLaneCount> base;
  for (std::size_t lane = 0; lane < lanes; ++lane) {
    std::uint32_t mask = active;
    for (unsigned b = 0; b < digit_bits; ++b)
      mask &= ((digits[lane] >> b) & 1u) ? votes[b] : ~votes[b];
    peers[lane] = mask;
    if (static_cast<std::size_t>(std::countr_zero(mask)) == lane) {
      auto& slot = running[digits[lane]];
      base[lane] = slot;
      slot += static_cast<std::uint32_t>(std::popcount(mask));
    }
  }
  for (std::size_t lane = 0; lane < lanes; ++lane) {
    const std::uint32_t lower = (std::uint32_t{1} << lane) - 1;
    const auto leader = static_cast<std::size_t>(std::countr_zero(peers[lane]));
    ranks[lane] = base[leader] +
                  static_cast<std::uint32_t>(std::popcount(peers[lane] & lower));
  }
}

BatchRanking wlms_rank(std::span<const std::uint32_t> digits,
                       unsigned digit_bits) {
  BatchRanking out;
  out.counts.assign(std::size_t{1} << digit_bits, 0);
  out.ranks.assign(digits.size(), 0);
  wlms_rank_into(digits, digit_bits, out.counts, out.ranks);
  return out;
}

void rank_tile(std::span<const std::uint32_t> digits, const RadixConfig& cfg,
               TileRanking& out) {
  out.digit_counts.assign(cfg.radix, 0);
  out.ranks.resize(digits.size());
  for (std::size_t i = 0; i < digits.size(); i += kLaneCount) {
    const std::size_t lanes = std::min(kLaneCount, digits.size() - i);
    wlms_rank_into(digits.subspan(i, lanes), cfg.digit_bits, out.digit_counts,
                   std::span(out.ranks).subspan(i, lanes));
  }
}

TileRanking rank_tile(std::span<const std::uint32_t> digits,
                      const RadixConfig& cfg) {
  TileRanking out;
  rank_tile(digits, cfg, out);
  return out;
}

std::optional<std::uint32_t> short_circuit_check(const TileRanking& t) {
  const std::size_t size = t.ranks.size();
  if (size == 0) return std::nullopt;
  for (std::size_t d = 0; d < t.digit_counts.size(); ++d) {
    if (t.digit_counts[d] == size) return static_cast<std::uint32_t>(d);
    if (t.digit_counts[d] != 0) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace onesweep

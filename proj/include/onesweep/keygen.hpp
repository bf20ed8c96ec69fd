#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace onesweep {

/// Entropy-banded key distribution: every key is the bitwise AND of q
/// uniform random words, so each bit is set with probability 2^-q.
struct KeyGenSpec {
  unsigned q = 1;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  unsigned key_bits = 32;
};

/// Counter-based 64-bit generator (SplitMix64 finalizer over a Weyl
/// sequence); word(i) depends only on the seed and i.
std::uint64_t random_word(std::uint64_t seed, std::uint64_t index) noexcept;

/// Fills out[j] with key number first + j of the stream described by spec.
/// Key i ANDs generator words i*q .. i*q + q - 1.
void generate_keys_into(const KeyGenSpec& spec, std::uint64_t first,
                        std::span<std::uint32_t> out);
void generate_keys_into(const KeyGenSpec& spec, std::uint64_t first,
                        std::span<std::uint64_t> out);

std::vector<std::uint32_t> generate_keys32(const KeyGenSpec& spec);
std::vector<std::uint64_t> generate_keys64(const KeyGenSpec& spec);

/// Mean over bit positions of the binary entropy of each bit's empirical
/// frequency of ones. Throws std::invalid_argument on empty input.
double empirical_bit_entropy(std::span<const std::uint32_t> keys);
double empirical_bit_entropy(std::span<const std::uint64_t> keys);

/// H(2^-q), the per-bit entropy of the band. q must be at least 1.
double expected_entropy(unsigned q);

double binary_entropy(double p) noexcept;

}  // namespace onesweep

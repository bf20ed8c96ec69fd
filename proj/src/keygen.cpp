#include "onesweep/keygen.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace onesweep {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

template <class U>
void fill(const KeyGenSpec& spec, std::uint64_t first, std::span<U> out) {
  if (spec.q == 0) throw std::invalid_argument("q must be at least 1");
  const std::uint64_t q = spec.q;
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::uint64_t word = ~std::uint64_t{0};
    const std::uint64_t base = (first + j) * q;
    for (std::uint64_t s = 0; s < q; ++s)
      word &= random_word(spec.seed, base + s);
    if constexpr (sizeof(U) == 4)
      out[j] = static_cast<U>(word >> 32);
    else
      out[j] = word;
  }
}

template <class U>
double entropy_of(std::span<const U> keys) {
  if (keys.empty())
    throw std::invalid_argument("entropy of an empty key set is undefined");
  constexpr unsigned kBits = sizeof(U) * 8;
  std::array<std::uint64_t, kBits> ones{};
  for (const U k : keys)
    for (unsigned b = 0; b < kBits; ++b) ones[b] += (k >> b) & 1u;
  double total = 0.0;
  const auto n = static_cast<double>(keys.size());
  for (unsigned b = 0; b < kBits; ++b)
    total += binary_entropy(static_cast<double>(ones[b]) / n);
  return total / kBits;
}

}  // namespace

std::uint64_t random_word(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void generate_keys_into(const KeyGenSpec& spec, std::uint64_t first,
                        std::span<std::uint32_t> out) {
  fill(spec, first, out);
}

void generate_keys_into(const KeyGenSpec& spec, std::uint64_t first,
                        std::span<std::uint64_t> out) {
  fill(spec, first, out);
}

std::vector<std::uint32_t> generate_keys32(const KeyGenSpec& spec) {
  std::vector<std::uint32_t> out(spec.n);
  fill<std::uint32_t>(spec, 0, out);
  return out;
}

std::vector<std::uint64_t> generate_keys64(const KeyGenSpec& spec) {
  std::vector<std::uint64_t> out(spec.n);
  fill<std::uint64_t>(spec, 0, out);
  return out;
}

double empirical_bit_entropy(std::span<const std::uint32_t> keys) {
  return entropy_of(keys);
}

double empirical_bit_entropy(std::span<const std::uint64_t> keys) {
  return entropy_of(keys);
}

double binary_entropy(double p) noexcept {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

double expected_entropy(unsigned q) {
  if (q == 0) throw std::invalid_argument("q must be at least 1");
  return binary_entropy(std::ldexp(1.0, -static_cast<int>(q)));
}

}  // namespace onesweep

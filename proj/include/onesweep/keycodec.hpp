#pragma once

#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <type_traits>

namespace onesweep {

// Largest strip the binning pass processes with 30-bit status counters, and
// the largest histogram portion accumulated in 32-bit private counters.
inline constexpr std::size_t kMaxStripSize = std::size_t{1} << 28;
inline constexpr std::size_t kMaxPortionSize = std::size_t{1} << 30;
inline constexpr std::size_t kMaxTileSize = (std::size_t{1} << 30) - 1;
inline constexpr std::size_t kDefaultTileSize = 4096;
inline constexpr unsigned kDefaultDigitBits = 8;

/// Radix geometry and tiling for one sort.
struct RadixConfig {
  unsigned key_bits = 32;
  unsigned digit_bits = kDefaultDigitBits;
  std::uint32_t radix = 256;
  unsigned passes = 4;
  std::size_t tile_size = kDefaultTileSize;
  std::size_t strip_size = kMaxStripSize;
  std::size_t portion_size = kMaxPortionSize;

  std::uint32_t digit_mask() const noexcept { return radix - 1; }
};

/// Validates the parameters and fills in radix and pass count.
/// Throws std::invalid_argument when any bound is violated.
inline RadixConfig radix_plan(unsigned key_bits, unsigned digit_bits,
                              std::size_t tile_size = kDefaultTileSize,
                              std::size_t strip_size = kMaxStripSize,
                              std::size_t portion_size = kMaxPortionSize) {
  if (key_bits != 32 && key_bits != 64)
    throw std::invalid_argument("key width must be 32 or 64 bits");
  if (digit_bits < 1 || digit_bits > 16)
    throw std::invalid_argument("digit width must be in [1, 16] bits");
  if (tile_size == 0 || tile_size > kMaxTileSize)
    throw std::invalid_argument("tile size must be in [1, 2^30)");
  if (strip_size == 0 || strip_size > kMaxStripSize)
    throw std::invalid_argument("strip size must be in [1, 2^28]");
  if (portion_size == 0 || portion_size > kMaxPortionSize)
    throw std::invalid_argument("portion size must be in [1, 2^30]");

  RadixConfig cfg;
  cfg.key_bits = key_bits;
  cfg.digit_bits = digit_bits;
  cfg.radix = std::uint32_t{1} << digit_bits;
  cfg.passes = (key_bits + digit_bits - 1) / digit_bits;
  cfg.tile_size = tile_size;
  cfg.strip_size = strip_size;
  cfg.portion_size = portion_size;
  return cfg;
}

// Bit-level encodings, generic over the unsigned width so that narrow
// analogs can be checked exhaustively.
namespace bits {

template <std::unsigned_integral U>
inline constexpr U kSignBit = U{1} << (sizeof(U) * 8 - 1);

template <std::unsigned_integral U>
constexpr U encode_signed(U raw) noexcept {
  return static_cast<U>(raw ^ kSignBit<U>);
}
template <std::unsigned_integral U>
constexpr U decode_signed(U enc) noexcept {
  return static_cast<U>(enc ^ kSignBit<U>);
}

// Negative: flip everything. Non-negative: flip the sign bit only.
template <std::unsigned_integral U>
constexpr U encode_float(U raw) noexcept {
  return (raw & kSignBit<U>) ? static_cast<U>(~raw)
                             : static_cast<U>(raw ^ kSignBit<U>);
}
template <std::unsigned_integral U>
constexpr U decode_float(U enc) noexcept {
  return (enc & kSignBit<U>) ? static_cast<U>(enc ^ kSignBit<U>)
                             : static_cast<U>(~enc);
}

}  // namespace bits

/// Maps a supported key type onto its order-preserving unsigned pattern.
template <class T>
struct KeyTraits;

template <>
struct KeyTraits<std::uint32_t> {
  using Bits = std::uint32_t;
  static constexpr Bits encode(std::uint32_t k) noexcept { return k; }
  static constexpr std::uint32_t decode(Bits b) noexcept { return b; }
};

template <>
struct KeyTraits<std::uint64_t> {
  using Bits = std::uint64_t;
  static constexpr Bits encode(std::uint64_t k) noexcept { return k; }
  static constexpr std::uint64_t decode(Bits b) noexcept { return b; }
};

template <>
struct KeyTraits<std::int32_t> {
  using Bits = std::uint32_t;
  static constexpr Bits encode(std::int32_t k) noexcept {
    return bits::encode_signed(static_cast<Bits>(k));
  }
  static constexpr std::int32_t decode(Bits b) noexcept {
    return static_cast<std::int32_t>(bits::decode_signed(b));
  }
};

template <>
struct KeyTraits<std::int64_t> {
  using Bits = std::uint64_t;
  static constexpr Bits encode(std::int64_t k) noexcept {
    return bits::encode_signed(static_cast<Bits>(k));
  }
  static constexpr std::int64_t decode(Bits b) noexcept {
    return static_cast<std::int64_t>(bits::decode_signed(b));
  }
};

template <>
struct KeyTraits<float> {
  using Bits = std::uint32_t;
  static constexpr Bits encode(float k) noexcept {
    return bits::encode_float(std::bit_cast<Bits>(k));
  }
  static constexpr float decode(Bits b) noexcept {
    return std::bit_cast<float>(bits::decode_float(b));
  }
};

template <>
struct KeyTraits<double> {
  using Bits = std::uint64_t;
  static constexpr Bits encode(double k) noexcept {
    return bits::encode_float(std::bit_cast<Bits>(k));
  }
  static constexpr double decode(Bits b) noexcept {
    return std::bit_cast<double>(bits::decode_float(b));
  }
};

template <class T>
concept SortableKey = requires(T k) {
  { KeyTraits<T>::encode(k) } -> std::same_as<typename KeyTraits<T>::Bits>;
};

template <SortableKey T>
using EncodedKey = typename KeyTraits<T>::Bits;

template <SortableKey T>
inline constexpr unsigned kKeyBits = sizeof(T) * 8;

template <SortableKey T>
constexpr EncodedKey<T> encode_key(T key) noexcept {
  return KeyTraits<T>::encode(key);
}

template <SortableKey T>
constexpr T decode_key(EncodedKey<T> bits) noexcept {
  return KeyTraits<T>::decode(bits);
}

/// Digit at `place`; the top place is zero-extended when d does not divide k.
template <std::unsigned_integral U>
constexpr std::uint32_t extract_digit(U bits, unsigned place,
                                      const RadixConfig& cfg) noexcept {
  return static_cast<std::uint32_t>(bits >> (place * cfg.digit_bits)) &
         cfg.digit_mask();
}

/// Runtime tag for the key types accepted by the CLI and file formats.
enum class KeyType { U32, U64, I32, I64, F32, F64 };

inline constexpr unsigned key_type_bits(KeyType t) noexcept {
  switch (t) {
    case KeyType::U32:
    case KeyType::I32:
    case KeyType::F32:
      return 32;
    default:
      return 64;
  }
}

inline constexpr std::string_view key_type_name(KeyType t) noexcept {
  switch (t) {
    case KeyType::U32: return "u32";
    case KeyType::U64: return "u64";
    case KeyType::I32: return "i32";
    case KeyType::I64: return "i64";
    case KeyType::F32: return "f32";
    case KeyType::F64: return "f64";
  }
  return "?";
}

/// Invokes f with a value-initialized instance of the concrete key type.
template <class F>
decltype(auto) visit_key_type(KeyType t, F&& f) {
  switch (t) {
    case KeyType::U32: return f(std::uint32_t{});
    case KeyType::U64: return f(std::uint64_t{});
    case KeyType::I32: return f(std::int32_t{});
    case KeyType::I64: return f(std::int64_t{});
    case KeyType::F32: return f(float{});
    case KeyType::F64: return f(double{});
  }
  throw std::invalid_argument("unknown key type");
}

}  // namespace onesweep

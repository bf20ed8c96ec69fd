#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "onesweep/keycodec.hpp"
#include "support/oracles.hpp"

using namespace onesweep;

TEST_CASE("radix_plan computes radix and pass count") {
  auto c = radix_plan(32, 8, 4096);
  CHECK(c.passes == 4);
  CHECK(c.radix == 256);
  CHECK(c.strip_size == std::size_t{1} << 28);
  CHECK(c.portion_size == std::size_t{1} << 30);

  c = radix_plan(32, 7);
  CHECK(c.passes == 5);
  CHECK(c.radix == 128);

  c = radix_plan(64, 8);
  CHECK(c.passes == 8);
  CHECK(c.radix == 256);

  CHECK(radix_plan(32, 1).passes == 32);
  CHECK(radix_plan(64, 16).passes == 4);
  CHECK(radix_plan(32, 5).passes == 7);
}

TEST_CASE("radix_plan rejects out-of-range parameters") {
  CHECK_THROWS_AS(radix_plan(32, 0), std::invalid_argument);
  CHECK_THROWS_AS(radix_plan(32, 17), std::invalid_argument);
  CHECK_THROWS_AS(radix_plan(16, 8), std::invalid_argument);
  CHECK_THROWS_AS(radix_plan(32, 8, 0), std::invalid_argument);
  CHECK_THROWS_AS(radix_plan(32, 8, std::size_t{1} << 30), std::invalid_argument);
  CHECK_NOTHROW(radix_plan(32, 8, (std::size_t{1} << 30) - 1));
  CHECK_THROWS_AS(radix_plan(32, 8, 4096, 0), std::invalid_argument);
  CHECK_THROWS_AS(radix_plan(32, 8, 4096, (std::size_t{1} << 28) + 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(radix_plan(32, 8, 4096, 1024, 0), std::invalid_argument);
  CHECK_THROWS_AS(radix_plan(32, 8, 4096, 1024, (std::size_t{1} << 30) + 1),
                  std::invalid_argument);
}

TEST_CASE("encode_key examples") {
  CHECK(encode_key(std::uint32_t{0}) == 0u);
  CHECK(encode_key(std::int32_t{-1}) == 0x7FFFFFFFu);
  CHECK(encode_key(std::numeric_limits<std::int32_t>::min()) == 0u);
  CHECK(encode_key(-0.0f) == 0x7FFFFFFFu);
  CHECK(encode_key(0.0f) == 0x80000000u);
  CHECK(encode_key(-std::numeric_limits<float>::infinity()) <
        encode_key(std::numeric_limits<float>::lowest()));
  CHECK(encode_key(std::numeric_limits<std::int64_t>::min()) == 0u);
  CHECK(encode_key(-0.0) == 0x7FFFFFFFFFFFFFFFull);
}

TEST_CASE("decode_key examples") {
  CHECK(decode_key<std::uint32_t>(0) == 0u);
  CHECK(decode_key<std::int32_t>(0x7FFFFFFF) == -1);
  const float z = decode_key<float>(0x80000000u);
  CHECK(z == 0.0f);
  CHECK_FALSE(std::signbit(z));
  CHECK(std::signbit(decode_key<float>(0x7FFFFFFFu)));
}

TEST_CASE("NaN payloads order outside the infinities") {
  const float pos_nan = std::bit_cast<float>(0x7FC00000u);
  const float neg_nan = std::bit_cast<float>(0xFFC00000u);
  CHECK(encode_key(pos_nan) > encode_key(std::numeric_limits<float>::infinity()));
  CHECK(encode_key(neg_nan) < encode_key(-std::numeric_limits<float>::infinity()));
  CHECK(std::bit_cast<std::uint32_t>(decode_key<float>(encode_key(neg_nan))) ==
        0xFFC00000u);
}

TEST_CASE("16-bit analogs: exhaustive monotone bijection") {
  SUBCASE("unsigned is the identity") {
    for (std::uint32_t v = 0; v < 0x10000; ++v) {
      REQUIRE(encode_key(v << 16) == v << 16);
      REQUIRE(decode_key<std::uint32_t>(v) == v);
    }
  }
  SUBCASE("signed") {
    std::vector<std::uint16_t> enc(0x10000);
    for (std::uint32_t v = 0; v < 0x10000; ++v) {
      const auto raw = static_cast<std::uint16_t>(v);
      enc[v] = bits::encode_signed(raw);
      REQUIRE(bits::decode_signed(enc[v]) == raw);
    }
    for (std::int32_t a = -32768; a < 32767; ++a) {
      const auto ea = enc[static_cast<std::uint16_t>(a)];
      const auto eb = enc[static_cast<std::uint16_t>(a + 1)];
      REQUIRE(ea < eb);
    }
  }
  SUBCASE("float-like (binary16)") {
    std::vector<std::uint16_t> finite_or_inf;
    for (std::uint32_t v = 0; v < 0x10000; ++v) {
      const auto raw = static_cast<std::uint16_t>(v);
      REQUIRE(bits::decode_float(bits::encode_float(raw)) == raw);
      if (!std::isnan(oracle::half_to_double(raw))) finite_or_inf.push_back(raw);
    }
    std::sort(finite_or_inf.begin(), finite_or_inf.end(),
              [](std::uint16_t a, std::uint16_t b) {
                return bits::encode_float(a) < bits::encode_float(b);
              });
    for (std::size_t i = 1; i < finite_or_inf.size(); ++i) {
      const double prev = oracle::half_to_double(finite_or_inf[i - 1]);
      const double cur = oracle::half_to_double(finite_or_inf[i]);
      if (prev == cur) {
        // Only the two zeros compare equal; -0 must come first.
        REQUIRE(prev == 0.0);
        REQUIRE(std::signbit(prev));
        REQUIRE_FALSE(std::signbit(cur));
      } else {
        REQUIRE(prev < cur);
      }
    }
  }
}

template <class F>
void check_random_float_order(std::size_t n) {
  using Bits = EncodedKey<F>;
  std::mt19937_64 rng(42);
  std::vector<F> values;
  values.reserve(n);
  while (values.size() < n) {
    const F f = std::bit_cast<F>(static_cast<Bits>(rng()));
    if (!std::isnan(f)) values.push_back(f);
  }
  auto by_bits = values;
  std::sort(by_bits.begin(), by_bits.end(),
            [](F a, F b) { return encode_key(a) < encode_key(b); });
  auto native = values;
  std::sort(native.begin(), native.end());
  REQUIRE(by_bits.size() == native.size());
  for (std::size_t i = 0; i < n; ++i) REQUIRE(by_bits[i] == native[i]);
  for (const F f : values)
    REQUIRE(std::bit_cast<Bits>(decode_key<F>(encode_key(f))) ==
            std::bit_cast<Bits>(f));
}

TEST_CASE("random floats sort identically by encoding and by value") {
  check_random_float_order<float>(1'000'000);
  check_random_float_order<double>(1'000'000);
}

TEST_CASE("extract_digit examples") {
  const auto c8 = radix_plan(32, 8);
  CHECK(extract_digit(0xDEADBEEFu, 1, c8) == 0xBEu);

  const auto c3 = radix_plan(32, 3);
  CHECK(extract_digit(17u, 0, c3) == 1u);
  CHECK(extract_digit(8u, 0, c3) == 0u);
  CHECK(extract_digit(24u, 0, c3) == 0u);
  CHECK(extract_digit(5u, 0, c3) == 5u);

  const auto c7 = radix_plan(32, 7);
  CHECK(c7.passes == 5);
  CHECK(extract_digit(0xFFFFFFFFu, 4, c7) == 15u);
}

TEST_CASE("extract_digit matches a per-bit oracle for every place") {
  std::mt19937_64 rng(7);
  for (unsigned d = 1; d <= 16; ++d) {
    const auto c32 = radix_plan(32, d);
    const auto c64 = radix_plan(64, d);
    for (int i = 0; i < 200; ++i) {
      const auto w64 = rng();
      const auto w32 = static_cast<std::uint32_t>(w64);
      for (unsigned p = 0; p < c32.passes; ++p)
        REQUIRE(extract_digit(w32, p, c32) == oracle::digit_by_bits(w32, p, d));
      for (unsigned p = 0; p < c64.passes; ++p)
        REQUIRE(extract_digit(w64, p, c64) == oracle::digit_by_bits(w64, p, d));
    }
    if (32 % d != 0) {
      const unsigned top_bits = 32 - (c32.passes - 1) * d;
      CHECK(extract_digit(0xFFFFFFFFu, c32.passes - 1, c32) ==
            (1u << top_bits) - 1);
    }
  }
}

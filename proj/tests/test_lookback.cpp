#include <doctest.h>

#include <array>
#include <atomic>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "onesweep/executor.hpp"
#include "onesweep/lookback.hpp"

using namespace onesweep;

namespace {

constexpr std::array<std::uint32_t, 5> kLocal = {11, 15, 9, 10, 8};
constexpr std::array<std::uint32_t, 5> kInclusive = {11, 26, 35, 45, 53};

// Runs one tile of the five-tile scenario inside a grid body.
void scenario_tile(CounterMatrix& m, BlockContext& ctx,
                   std::vector<std::uint32_t>& exclusive) {
  const std::size_t t = ctx.tile();
  ctx.pause();
  publish_local(m, 0, t, kLocal[t]);
  ctx.pause();
  const auto lb = lookback_exclusive(m, 0, t, [&] { ctx.wait(); });
  ctx.pause();
  publish_inclusive(m, 0, t, lb.exclusive + kLocal[t]);
  exclusive[t] = lb.exclusive;
}

}  // namespace

TEST_CASE("pack_counter puts the status in the two upper bits") {
  CHECK(pack_counter(CounterStatus::Local, 15) == 0x4000000Fu);
  CHECK(pack_counter(CounterStatus::Inclusive, 53) == 0x80000035u);
  CHECK(pack_counter(CounterStatus::NotReady, 0) == 0u);
  CHECK(unpack_counter(0x4000000Fu) ==
        UnpackedCounter{CounterStatus::Local, 15});
  CHECK(unpack_counter(0x80000035u) ==
        UnpackedCounter{CounterStatus::Inclusive, 53});
  CHECK(unpack_counter(0) == UnpackedCounter{CounterStatus::NotReady, 0});
}

TEST_CASE("pack/unpack round-trips every boundary value") {
  const std::uint32_t values[] = {0,          1,          2,
                                  0x1FFFFFFF, 0x20000000, 0x3FFFFFFE,
                                  0x3FFFFFFF};
  for (auto status : {CounterStatus::NotReady, CounterStatus::Local,
                      CounterStatus::Inclusive}) {
    for (auto v : values) {
      const auto w = pack_counter(status, v);
      CHECK((w >> 30) == static_cast<std::uint32_t>(status));
      CHECK((w & 0x3FFFFFFFu) == v);
      CHECK(unpack_counter(w) == UnpackedCounter{status, v});
    }
  }
  CHECK_THROWS_AS(pack_counter(CounterStatus::Local, 0x40000000u),
                  std::out_of_range);
  CHECK_THROWS_AS(pack_counter(CounterStatus::Inclusive, 0xFFFFFFFFu),
                  std::out_of_range);
}

TEST_CASE("publication words of the five-tile scenario") {
  CounterMatrix m(1, 5);
  for (std::size_t t = 0; t < 5; ++t) CHECK(m.load(0, t) == 0u);
  for (std::size_t t = 0; t < 5; ++t) publish_local(m, 0, t, kLocal[t]);
  CHECK(m.load(0, 0) == 0x4000000Bu);
  CHECK(m.load(0, 4) == 0x40000008u);

  publish_inclusive(m, 0, 1, 26);
  CHECK(m.load(0, 1) == 0x8000001Au);
  publish_inclusive(m, 0, 4, 53);
  CHECK(m.load(0, 4) == 0x80000035u);

  CounterMatrix zero(1, 1);
  publish_local(zero, 0, 0, 0);
  CHECK(zero.load(0, 0) == 0x40000000u);
}

TEST_CASE("lookback accumulates locals until an inclusive value") {
  CounterMatrix m(1, 5);
  for (std::size_t t = 0; t < 5; ++t) publish_local(m, 0, t, kLocal[t]);
  auto never = [] { FAIL("unexpected wait"); };

  CHECK(lookback_exclusive(m, 0, 0, never).exclusive == 0);
  CHECK(lookback_exclusive(m, 0, 0, never).reads == 0);
  // Only locals: sums all predecessors.
  CHECK(lookback_exclusive(m, 0, 2, never).exclusive == 26);
  CHECK(lookback_exclusive(m, 0, 2, never).reads == 2);

  publish_inclusive(m, 0, 0, 11);
  publish_inclusive(m, 0, 1, 26);
  // Stops at the first inclusive value it meets.
  const auto lb = lookback_exclusive(m, 0, 2, never);
  CHECK(lb.exclusive == 26);
  CHECK(lb.reads == 1);

  publish_inclusive(m, 0, 3, 45);
  const auto last = lookback_exclusive(m, 0, 4, never);
  CHECK(last.exclusive == 45);
  CHECK(last.reads == 1);
}

TEST_CASE("lookback waits on a not-ready predecessor") {
  CounterMatrix m(1, 3);
  publish_local(m, 0, 2, 4);
  publish_local(m, 0, 0, 7);
  publish_inclusive(m, 0, 0, 7);
  int waits = 0;
  const auto lb = lookback_exclusive(m, 0, 2, [&] {
    if (++waits == 3) publish_local(m, 0, 1, 5);
  });
  CHECK(waits == 3);
  CHECK(lb.exclusive == 12);
  CHECK(lb.reads == 5);
}

TEST_CASE("digit columns are independent") {
  CounterMatrix m(4, 3);
  for (std::uint32_t d = 0; d < 4; ++d)
    for (std::size_t t = 0; t < 3; ++t) publish_local(m, d, t, d * 10 + t);
  for (std::uint32_t d = 0; d < 4; ++d) {
    const auto lb = lookback_exclusive(m, d, 2, [] {});
    CHECK(lb.exclusive == (d * 10) + (d * 10 + 1));
  }
}

TEST_CASE("scenario final state under randomized schedules") {
  std::uint64_t mismatches = 0;
  for (unsigned workers : {1u, 2u, 3u, 5u, 8u}) {
    Executor exec(workers);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      exec.enable_delays({seed, std::chrono::microseconds(20), 200});
      CounterMatrix m(1, 5);
      std::vector<std::uint32_t> exclusive(5, ~0u);
      exec.run_blocks(5, [&](BlockContext& ctx) { scenario_tile(m, ctx, exclusive); });
      for (std::size_t t = 0; t < 5; ++t) {
        const auto c = unpack_counter(m.load(0, t));
        if (c.status != CounterStatus::Inclusive || c.value != kInclusive[t] ||
            exclusive[t] != kInclusive[t] - kLocal[t])
          ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("concurrent readers never observe a torn word") {
  CounterMatrix m(1, 1);
  std::atomic<bool> done{false};
  std::atomic<std::uint64_t> bad{0};
  std::thread reader([&] {
    while (!done.load()) {
      const auto c = unpack_counter(m.load(0, 0));
      const bool ok = (c.status == CounterStatus::NotReady && c.value == 0) ||
                      (c.status == CounterStatus::Local && c.value == 0x2AAAAAAA) ||
                      (c.status == CounterStatus::Inclusive && c.value == 0x3FFFFFFF);
      if (!ok) bad.fetch_add(1);
    }
  });
  for (int i = 0; i < 2000; ++i) {
    m.at(0, 0).store(0, std::memory_order_relaxed);
    publish_local(m, 0, 0, 0x2AAAAAAA);
    publish_inclusive(m, 0, 0, 0x3FFFFFFF);
  }
  done = true;
  reader.join();
  CHECK(bad.load() == 0);
}

TEST_CASE("many-tile chained scan terminates with exact prefixes") {
  const std::size_t g = 2000;
  std::mt19937 rng(3);
  std::vector<std::uint32_t> local(g);
  for (auto& v : local) v = rng() % 300;
  for (unsigned workers : {1u, 4u, 16u}) {
    Executor exec(workers);
    exec.enable_delays({workers, std::chrono::microseconds(5), 50});
    CounterMatrix m(2, g);
    exec.run_blocks(g, [&](BlockContext& ctx) {
      const std::size_t t = ctx.tile();
      for (std::uint32_t d = 0; d < 2; ++d) publish_local(m, d, t, local[t] * (d + 1));
      ctx.pause();
      for (std::uint32_t d = 0; d < 2; ++d) {
        const auto lb = lookback_exclusive(m, d, t, [&] { ctx.wait(); });
        publish_inclusive(m, d, t, lb.exclusive + local[t] * (d + 1));
      }
    });
    std::uint32_t running = 0;
    for (std::size_t t = 0; t < g; ++t) {
      running += local[t];
      REQUIRE(unpack_counter(m.load(0, t)) ==
              UnpackedCounter{CounterStatus::Inclusive, running});
      REQUIRE(unpack_counter(m.load(1, t)).value == 2 * running);
    }
  }
}
